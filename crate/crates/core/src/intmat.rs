//! Exact integer linear algebra at desk scale (rank <= 6).
//!
//! Everything here works on `Vec<i64>` vectors with `i128` intermediates.
//! Coordinates are bounded at construction time by the callers, so the
//! fraction-free determinants below cannot overflow.

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Divide by the gcd of the coordinates. Direction is preserved; the zero
/// vector stays zero.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i128, |acc, &x| gcd(acc, x as i128));
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|&x| (x as i128 / g) as i64).collect()
}

pub fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|&x| -x).collect()
}

pub fn scale_vec(c: i64, v: &[i64]) -> Vec<i64> {
    v.iter().map(|&x| c * x).collect()
}

/// `a*x + b*y` with i128 intermediates, collapsed back to i64.
pub fn combine(a: i128, x: &[i64], b: i128, y: &[i64]) -> Vec<i64> {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let v = a * xi as i128 + b * yi as i128;
            i64::try_from(v).expect("lattice combination overflow")
        })
        .collect()
}

/// Rank over the rationals via fraction-free elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..a.len()).find(|&r| a[r][col] != 0);
        let Some(pr) = pivot else { continue };
        a.swap(rank, pr);
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let (p, q) = (a[rank][col], a[r][col]);
                let g = gcd(p, q);
                let (p, q) = (p / g, q / g);
                for c in 0..n {
                    a[r][c] = a[r][c] * p - a[rank][c] * q;
                }
                // keep entries small
                let g2 = a[r].iter().fold(0i128, |acc, &x| gcd(acc, x));
                if g2 > 1 {
                    for c in 0..n {
                        a[r][c] /= g2;
                    }
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square matrix by Bareiss fraction-free elimination.
pub fn det(mat: &[Vec<i64>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Saturated basis of `{ x : <row, x> = 0 for every row }`.
///
/// Column reduction with a mirrored unimodular transform; the returned basis
/// extends to a basis of the full lattice.
pub fn kernel_basis(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), n);
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    // u[j] is the j-th column of the running unimodular transform.
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1 } else { 0 }).collect())
        .collect();
    let mut fixed = 0usize;
    for row in 0..a.len() {
        // gcd-reduce the active part of this row to a single nonzero entry
        loop {
            let mut best: Option<usize> = None;
            for j in fixed..n {
                if a[row][j] != 0 {
                    best = match best {
                        Some(b) if a[row][b].abs() <= a[row][j].abs() => Some(b),
                        _ => Some(j),
                    };
                }
            }
            let Some(piv) = best else { break };
            a.iter_mut().for_each(|r| r.swap(fixed, piv));
            u.swap(fixed, piv);
            let mut done = true;
            for j in fixed + 1..n {
                if a[row][j] != 0 {
                    let q = a[row][j].div_euclid(a[row][fixed]);
                    if q != 0 {
                        for r in a.iter_mut() {
                            let t = r[fixed];
                            r[j] -= q * t;
                        }
                        for i in 0..n {
                            let t = u[fixed][i];
                            u[j][i] -= q * t;
                        }
                    }
                    if a[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                fixed += 1;
                break;
            }
        }
        if fixed == n {
            break;
        }
    }
    let mut basis: Vec<Vec<i64>> = u[fixed..]
        .iter()
        .map(|col| {
            col.iter()
                .map(|&x| i64::try_from(x).expect("kernel basis overflow"))
                .collect::<Vec<i64>>()
        })
        .map(|v| canonical_sign(&v))
        .collect();
    basis.sort();
    basis
}

/// Flip sign so the first nonzero coordinate is positive.
pub fn canonical_sign(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => neg(v),
        _ => v.to_vec(),
    }
}

/// Canonical row Hermite form: positive pivots, entries above a pivot reduced
/// into `[0, pivot)`, zero rows dropped.
pub fn row_hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivot_row = 0usize;
    for col in 0..n {
        // gcd-combine all rows below pivot_row into one pivot for this column
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..a.len() {
                if a[r][col] != 0 {
                    best = match best {
                        Some(b) if a[b][col].abs() <= a[r][col].abs() => Some(b),
                        _ => Some(r),
                    };
                }
            }
            let Some(piv) = best else { break };
            a.swap(pivot_row, piv);
            let mut done = true;
            for r in pivot_row + 1..a.len() {
                if a[r][col] != 0 {
                    let q = a[r][col].div_euclid(a[pivot_row][col]);
                    for c in 0..n {
                        let t = a[pivot_row][c];
                        a[r][c] -= q * t;
                    }
                    if a[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if a[pivot_row][col] < 0 {
                    for c in 0..n {
                        a[pivot_row][c] = -a[pivot_row][c];
                    }
                }
                // reduce entries above the pivot
                let pivot_val = a[pivot_row][col];
                for r in 0..pivot_row {
                    let q = a[r][col].div_euclid(pivot_val);
                    if q != 0 {
                        for c in 0..n {
                            let t = a[pivot_row][c];
                            a[r][c] -= q * t;
                        }
                    }
                }
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == a.len() {
            break;
        }
    }
    a.truncate(pivot_row);
    a.iter()
        .map(|r| {
            r.iter()
                .map(|&x| i64::try_from(x).expect("hnf overflow"))
                .collect()
        })
        .collect()
}

/// Reduce `v` to the canonical representative of its coset modulo the row
/// span of an HNF basis.
pub fn reduce_mod_hnf(v: &[i64], hnf: &[Vec<i64>]) -> Vec<i64> {
    let mut out: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in hnf {
        let col = row.iter().position(|&x| x != 0).expect("zero row in hnf");
        let piv = row[col] as i128;
        let q = out[col].div_euclid(piv);
        if q != 0 {
            for (o, &r) in out.iter_mut().zip(row) {
                *o -= q * r as i128;
            }
        }
    }
    out.iter()
        .map(|&x| i64::try_from(x).expect("coset reduction overflow"))
        .collect()
}

/// Solve `A x = b` over the rationals for square `A` via Cramer's rule.
/// Returns `(numerators, denominator)` with the denominator positive, or
/// `None` if `A` is singular.
pub fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<(Vec<i128>, i128)> {
    let n = a.len();
    let d = det(a);
    if d == 0 {
        return None;
    }
    let mut nums = Vec::with_capacity(n);
    for i in 0..n {
        let mut ai = a.to_vec();
        for r in 0..n {
            ai[r][i] = b[r];
        }
        nums.push(det(&ai));
    }
    if d < 0 {
        Some((nums.iter().map(|&x| -x).collect(), -d))
    } else {
        Some((nums, d))
    }
}

/// Integral solution of a (possibly overdetermined) consistent system
/// `rows . m = rhs`. `None` when no rational solution exists or the rational
/// solution is not integral.
pub fn solve_integral(rows: &[Vec<i64>], rhs: &[i64], n: usize) -> Option<Vec<i64>> {
    // pick n independent rows, solve, then verify everything
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<i64>> = chosen.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == n {
                break;
            }
        }
    }
    if chosen.len() < n {
        // rows do not span; solve in the span and verify (underdetermined:
        // extend with zero constraints on a kernel complement)
        let sub: Vec<Vec<i64>> = chosen.iter().map(|&j| rows[j].clone()).collect();
        let ker = kernel_basis(&sub, n);
        let mut full = sub;
        for k in &ker {
            full.push(k.clone());
        }
        let mut full_rhs: Vec<i64> = chosen.iter().map(|&j| rhs[j]).collect();
        full_rhs.extend(std::iter::repeat(0).take(ker.len()));
        let (nums, den) = solve_rational(&full, &full_rhs)?;
        if nums.iter().any(|&x| x % den != 0) {
            return None;
        }
        let m: Vec<i64> = nums.iter().map(|&x| (x / den) as i64).collect();
        return verify_all(rows, rhs, &m).then_some(m);
    }
    let sub: Vec<Vec<i64>> = chosen.iter().map(|&j| rows[j].clone()).collect();
    let sub_rhs: Vec<i64> = chosen.iter().map(|&j| rhs[j]).collect();
    let (nums, den) = solve_rational(&sub, &sub_rhs)?;
    if nums.iter().any(|&x| x % den != 0) {
        return None;
    }
    let m: Vec<i64> = nums.iter().map(|&x| (x / den) as i64).collect();
    verify_all(rows, rhs, &m).then_some(m)
}

fn verify_all(rows: &[Vec<i64>], rhs: &[i64], m: &[i64]) -> bool {
    rows.iter()
        .zip(rhs)
        .all(|(row, &b)| dot(row, m) == b as i128)
}

/// gcd of all `k x k` minors of a matrix whose rows are the given vectors.
pub fn maximal_minor_gcd(rows: &[Vec<i64>]) -> i128 {
    let k = rows.len();
    if k == 0 {
        return 1;
    }
    let n = rows[0].len();
    let mut g = 0i128;
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        g = gcd(g, det(&sub));
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if cols[i] != i + n - k {
                cols[i] += 1;
                for j in i + 1..k {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Integer preimage under a surjective projection: finds `x` with
/// `pi . x = target`. `pi` has full row rank and surjects onto the target
/// lattice (its maximal minors have gcd 1).
pub fn preimage(pi: &[Vec<i64>], target: &[i64], n: usize) -> Option<Vec<i64>> {
    let k = pi.len();
    if k == 0 {
        return Some(vec![0; n]);
    }
    // column-reduce pi to lower-triangular L = pi * U with mirrored transform
    let mut a: Vec<Vec<i128>> = pi
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1 } else { 0 }).collect())
        .collect();
    let mut fixed = 0usize;
    for row in 0..k {
        loop {
            let mut best: Option<usize> = None;
            for j in fixed..n {
                if a[row][j] != 0 {
                    best = match best {
                        Some(b) if a[row][b].abs() <= a[row][j].abs() => Some(b),
                        _ => Some(j),
                    };
                }
            }
            let piv = best?;
            a.iter_mut().for_each(|r| r.swap(fixed, piv));
            u.swap(fixed, piv);
            let mut done = true;
            for j in fixed + 1..n {
                if a[row][j] != 0 {
                    let q = a[row][j].div_euclid(a[row][fixed]);
                    if q != 0 {
                        for r in a.iter_mut() {
                            let t = r[fixed];
                            r[j] -= q * t;
                        }
                        for i in 0..n {
                            let t = u[fixed][i];
                            u[j][i] -= q * t;
                        }
                    }
                    if a[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                fixed += 1;
                break;
            }
        }
    }
    if fixed < k {
        return None;
    }
    // forward substitution: L y = target, L lower triangular k x k
    let mut y = vec![0i128; k];
    for i in 0..k {
        let mut acc = target[i] as i128;
        for j in 0..i {
            acc -= a[i][j] * y[j];
        }
        if acc % a[i][i] != 0 {
            return None;
        }
        y[i] = acc / a[i][i];
    }
    let mut x = vec![0i128; n];
    for (j, yj) in y.iter().enumerate() {
        for i in 0..n {
            x[i] += u[j][i] * yj;
        }
    }
    Some(
        x.iter()
            .map(|&v| i64::try_from(v).expect("preimage overflow"))
            .collect(),
    )
}
