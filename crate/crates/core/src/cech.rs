//! Graded Čech cohomology on the maximal-cone cover, the vanishing
//! verifier, the spectral-degeneration check and the splitting verifier.
//!
//! Everything is computed grade by grade: both the Čech differential and the
//! de Rham differential preserve the character grading, so each grade `u` in
//! a finite degree box contributes a small complex of membership subspaces
//! whose ranks are found by exact elimination mod p. Grades are independent
//! pure tasks; with the `parallel` feature they are swept with rayon and the
//! results merged deterministically.
//!
//! Truncation to a box is monitored, not assumed: if any grade on the
//! outermost shell carries nonzero cohomology the table is flagged unsound
//! and callers are told to widen the box.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::SessionConfig;
use crate::divisor::{ample_check, Divisor};
use crate::error::{Error, Result};
use crate::forms::{
    is_section, koszul_image, multivector_masks, section_space, zb_subspaces, TorusForm,
};
use crate::fp;
use crate::intmat;
use crate::lattice::{BoxIter, Fan};
use crate::linalg::{self, Subspace};

/// A finite product of integer intervals in the character lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl DegreeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<DegreeBox> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput(format!(
                "malformed degree box {:?}..{:?}",
                lo, hi
            )));
        }
        Ok(DegreeBox { lo, hi })
    }

    pub fn points(&self) -> BoxIter {
        BoxIter::new(&self.lo, &self.hi)
    }

    pub fn len(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| (b - a + 1) as usize)
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn on_shell(&self, u: &[i64]) -> bool {
        u.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .any(|(&x, (&lo, &hi))| x == lo || x == hi)
    }
}

/// Default degree box for a twisted computation: the bounding box of every
/// rational solution of `<m, v_ρ> = -a_ρ` over the linearly independent ray
/// subsets (these include all vertices of the section polytope and the
/// per-cone linearization points), rounded outward and padded by the margin.
pub fn default_box(fan: &Fan, divisor: &Divisor, config: &SessionConfig) -> Result<DegreeBox> {
    divisor.check_fan(fan)?;
    let n = fan.rank();
    let margin = config.margin_for_rank(n);
    let rays = fan.rays();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    if rays.len() >= n {
        let mut subset: Vec<usize> = (0..n).collect();
        loop {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&i| rays[i].clone()).collect();
            let rhs: Vec<i64> = subset.iter().map(|&i| -divisor.coeffs[i]).collect();
            if let Some((nums, den)) = intmat::solve_rational(&rows, &rhs) {
                for j in 0..n {
                    let fl = nums[j].div_euclid(den) as i64;
                    let ce = -((-nums[j]).div_euclid(den)) as i64;
                    lo[j] = lo[j].min(fl);
                    hi[j] = hi[j].max(ce);
                }
            }
            // next n-subset of the rays
            let m = rays.len();
            let mut i = n;
            let mut done = true;
            while i > 0 {
                i -= 1;
                if subset[i] != i + m - n {
                    subset[i] += 1;
                    for j in i + 1..n {
                        subset[j] = subset[j - 1] + 1;
                    }
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    for j in 0..n {
        lo[j] -= margin;
        hi[j] += margin;
    }
    let bx = DegreeBox::new(lo, hi)?;
    if bx.len() > config.max_box_points {
        return Err(Error::Capacity(format!(
            "degree box of {} grades exceeds cap {}",
            bx.len(),
            config.max_box_points
        )));
    }
    Ok(bx)
}

/// The nerve of the maximal-cone cover: all nonempty chains, each paired
/// with its intersection cone (a listed fan cone, found by ray-set
/// intersection).
struct Cover {
    /// chain members are positions into the maximal-cone ordering
    chains: Vec<(Vec<usize>, usize)>,
    by_level: Vec<Vec<usize>>,
    levels: usize,
}

fn build_cover(fan: &Fan, order: &[usize]) -> Result<Cover> {
    let t = order.len();
    if t == 0 || t > 12 {
        return Err(Error::Capacity(format!(
            "cover with {} maximal cones outside supported range",
            t
        )));
    }
    let mut chains: Vec<(Vec<usize>, usize)> = Vec::new();
    for mask in 1u32..(1 << t) {
        let members: Vec<usize> = (0..t).filter(|&i| mask & (1 << i) != 0).collect();
        let mut rayset = fan.cones()[order[members[0]]].clone();
        for &mi in &members[1..] {
            rayset = rayset
                .intersection(&fan.cones()[order[mi]])
                .copied()
                .collect();
        }
        let cone = fan.cone_index(&rayset).ok_or_else(|| {
            Error::InternalInconsistency("chain intersection is not a listed cone".into())
        })?;
        chains.push((members, cone));
    }
    chains.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let mut by_level = vec![Vec::new(); t];
    for (i, (members, _)) in chains.iter().enumerate() {
        by_level[members.len() - 1].push(i);
    }
    Ok(Cover {
        chains,
        by_level,
        levels: t,
    })
}

/// Mask-indexed membership subspaces for (cone, form degree) pairs. Index
/// bit k corresponds to the k-th ray of the cone in sorted ray-index order.
struct SpaceCache {
    spaces: HashMap<(usize, usize), Vec<Subspace>>,
    cone_rays: HashMap<usize, Vec<Vec<i64>>>,
}

fn build_space_cache(fan: &Fan, p: u64, p_forms: &[usize], cones: &[usize]) -> SpaceCache {
    let n = fan.rank();
    let mut spaces = HashMap::new();
    let mut cone_rays = HashMap::new();
    for &ci in cones {
        let ray_idxs = fan.cone_rays(ci);
        let rays: Vec<Vec<i64>> = ray_idxs.iter().map(|&r| fan.rays()[r].clone()).collect();
        cone_rays.insert(ci, rays.clone());
        for &pf in p_forms {
            let masks = multivector_masks(n, pf);
            let r = rays.len();
            let mut per_mask = Vec::with_capacity(1 << r);
            for mask in 0u32..(1 << r) {
                let rows: Vec<Vec<i64>> = (0..r)
                    .filter(|&k| mask & (1 << k) != 0)
                    .map(|k| rays[k].clone())
                    .collect();
                per_mask.push(crate::forms::annihilator_power(p, n, pf, &rows, &masks));
            }
            spaces.insert((ci, pf), per_mask);
        }
    }
    SpaceCache { spaces, cone_rays }
}

impl SpaceCache {
    /// Membership subspace at grade `u`, or `None` when an inequality fails.
    fn space(
        &self,
        cone: usize,
        p_form: usize,
        u: &[i64],
        ray_ids: &[usize],
        divisor: &Divisor,
    ) -> Option<&Subspace> {
        let rays = &self.cone_rays[&cone];
        let mut mask = 0u32;
        for (k, ray) in rays.iter().enumerate() {
            let a = divisor.coeffs[ray_ids[k]];
            let pairing = intmat::dot(u, ray);
            if pairing < -(a as i128) {
                return None;
            }
            if pairing == -(a as i128) {
                mask |= 1 << k;
            }
        }
        Some(&self.spaces[&(cone, p_form)][mask as usize])
    }
}

/// One cohomology dimension; exact when the enclosing table is sound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub lo: u64,
    pub hi: u64,
}

impl DimEntry {
    pub fn exact(v: u64) -> DimEntry {
        DimEntry { lo: v, hi: v }
    }

    pub fn value(&self) -> Option<u64> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub p_form: usize,
    /// `h[q]` over Čech levels `q = 0 .. #maximal cones`.
    pub h: Vec<DimEntry>,
    pub degree_box: DegreeBox,
    pub grades_scanned: usize,
    /// Shell grades that carried nonzero cohomology; zero means sound.
    pub shell_hits: usize,
    pub sound: bool,
}

impl CohomologyTable {
    pub fn h_at(&self, q: usize) -> u64 {
        self.h.get(q).map_or(0, |e| e.lo)
    }
}

fn grade_cohomology(
    fan: &Fan,
    cover: &Cover,
    cache: &SpaceCache,
    p: u64,
    p_form: usize,
    divisor: &Divisor,
    u: &[i64],
    max_dense: usize,
) -> Vec<u64> {
    let spaces: Vec<Option<&Subspace>> = cover
        .chains
        .iter()
        .map(|(_, cone)| {
            let ray_ids = fan.cone_rays(*cone);
            cache.space(*cone, p_form, u, &ray_ids, divisor)
        })
        .collect();
    let dims: Vec<usize> = spaces.iter().map(|s| s.map_or(0, |s| s.dim())).collect();
    let chain_pos: HashMap<&[usize], usize> = cover
        .chains
        .iter()
        .enumerate()
        .map(|(i, (m, _))| (m.as_slice(), i))
        .collect();
    let mut ranks = vec![0usize; cover.levels];
    for k in 0..cover.levels.saturating_sub(1) {
        let src_chains = &cover.by_level[k];
        let tgt_chains = &cover.by_level[k + 1];
        let src_dim: usize = src_chains.iter().map(|&c| dims[c]).sum();
        let tgt_dim: usize = tgt_chains.iter().map(|&c| dims[c]).sum();
        if src_dim == 0 || tgt_dim == 0 {
            continue;
        }
        let mut src_offset = HashMap::new();
        let mut off = 0;
        for &c in src_chains {
            src_offset.insert(c, off);
            off += dims[c];
        }
        // one row per source basis vector
        let mut rows = vec![vec![0u64; tgt_dim]; src_dim];
        let mut tgt_off = 0;
        for &tc in tgt_chains {
            let (tmembers, _) = &cover.chains[tc];
            let tspace = match spaces[tc] {
                Some(s) => s,
                None => continue,
            };
            for j in 0..tmembers.len() {
                let mut sub = tmembers.clone();
                sub.remove(j);
                let sc = chain_pos[sub.as_slice()];
                let sspace = match spaces[sc] {
                    Some(s) => s,
                    None => continue,
                };
                let sign_neg = j % 2 == 1;
                let so = src_offset[&sc];
                for (bi, b) in sspace.basis.iter().enumerate() {
                    let coords = tspace
                        .express(b)
                        .expect("restriction must land in the larger membership space");
                    for (ci, &v) in coords.iter().enumerate() {
                        if v != 0 {
                            let val = if sign_neg { fp::neg_mod(v, p) } else { v };
                            rows[so + bi][tgt_off + ci] =
                                fp::add_mod(rows[so + bi][tgt_off + ci], val, p);
                        }
                    }
                }
            }
            tgt_off += dims[tc];
        }
        ranks[k] = linalg::rank(p, &rows, max_dense);
    }
    let mut h = vec![0u64; cover.levels];
    for k in 0..cover.levels {
        let level_dim: usize = cover.by_level[k].iter().map(|&c| dims[c]).sum();
        let below = if k == 0 { 0 } else { ranks[k - 1] };
        let here = if k < cover.levels - 1 { ranks[k] } else { 0 };
        h[k] = (level_dim - here - below) as u64;
    }
    h
}

fn sweep<T, F>(grades: Vec<Vec<i64>>, parallel: bool, f: F) -> Vec<T>
where
    F: Fn(&[i64]) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            use rayon::prelude::*;
            return grades.par_iter().map(|g| f(g)).collect();
        }
    }
    let _ = parallel;
    grades.iter().map(|g| f(g)).collect()
}

/// Graded Čech cohomology dimensions `h^q` of degree-`p_form` reflexive
/// forms twisted by `divisor`, summed over the grades of the box.
pub fn cohomology_dims(
    fan: &Fan,
    p_form: usize,
    divisor: &Divisor,
    box_override: Option<DegreeBox>,
    config: &SessionConfig,
) -> Result<CohomologyTable> {
    cohomology_dims_inner(fan, p_form, divisor, box_override, config, true, None)
}

/// Sequential variant of [`cohomology_dims`] with the same contract; kept
/// callable regardless of features so the benches can compare both paths.
pub fn cohomology_dims_sequential(
    fan: &Fan,
    p_form: usize,
    divisor: &Divisor,
    box_override: Option<DegreeBox>,
    config: &SessionConfig,
) -> Result<CohomologyTable> {
    cohomology_dims_inner(fan, p_form, divisor, box_override, config, false, None)
}

/// Validation hook: compute with an explicit ordering of the maximal cones.
/// Ranks are ordering-invariant; only the sign bookkeeping changes.
pub fn cohomology_dims_ordered(
    fan: &Fan,
    p_form: usize,
    divisor: &Divisor,
    box_override: Option<DegreeBox>,
    config: &SessionConfig,
    order: Vec<usize>,
) -> Result<CohomologyTable> {
    cohomology_dims_inner(fan, p_form, divisor, box_override, config, true, Some(order))
}

fn cohomology_dims_inner(
    fan: &Fan,
    p_form: usize,
    divisor: &Divisor,
    box_override: Option<DegreeBox>,
    config: &SessionConfig,
    parallel: bool,
    order: Option<Vec<usize>>,
) -> Result<CohomologyTable> {
    config.validate()?;
    divisor.check_fan(fan)?;
    if !fan.is_complete(config.seed)? {
        return Err(Error::InvalidInput(
            "cohomology requires a complete fan".into(),
        ));
    }
    let degree_box = match box_override {
        Some(b) => b,
        None => default_box(fan, divisor, config)?,
    };
    if degree_box.len() > config.max_box_points {
        return Err(Error::Capacity(format!(
            "degree box of {} grades exceeds cap {}",
            degree_box.len(),
            config.max_box_points
        )));
    }
    let order = order.unwrap_or_else(|| fan.maximal_cones().to_vec());
    let cover = build_cover(fan, &order)?;
    let used_cones: Vec<usize> = {
        let mut v: Vec<usize> = cover.chains.iter().map(|(_, c)| *c).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let cache = build_space_cache(fan, config.prime, &[p_form], &used_cones);
    let grades: Vec<Vec<i64>> = degree_box.points().collect();
    let per_grade = sweep(grades.clone(), parallel, |u| {
        let h = grade_cohomology(
            fan,
            &cover,
            &cache,
            config.prime,
            p_form,
            divisor,
            u,
            config.max_dense_cols,
        );
        let shell_hit = degree_box.on_shell(u) && h.iter().any(|&x| x > 0);
        (h, shell_hit)
    });
    let mut h = vec![0u64; cover.levels];
    let mut shell_hits = 0usize;
    for (hs, hit) in per_grade {
        for (acc, v) in h.iter_mut().zip(hs) {
            *acc += v;
        }
        if hit {
            shell_hits += 1;
        }
    }
    Ok(CohomologyTable {
        p_form,
        h: h.into_iter().map(DimEntry::exact).collect(),
        degree_box,
        grades_scanned: grades.len(),
        shell_hits,
        sound: shell_hits == 0,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BottReport {
    pub prime: u64,
    pub divisor: Vec<i64>,
    pub tables: Vec<CohomologyTable>,
    /// `(p_form, q, h)` entries with `q > 0` and `h != 0` despite a sound
    /// box. Nonempty means the vanishing theorem failed — an engine bug.
    pub violations: Vec<(usize, usize, u64)>,
    pub all_sound: bool,
    pub pass: bool,
}

/// Sweep every form degree and assert `h^q = 0` for `q > 0`; requires a
/// certified ample divisor.
pub fn bott_verify(
    fan: &Fan,
    divisor: &Divisor,
    box_override: Option<DegreeBox>,
    config: &SessionConfig,
) -> Result<BottReport> {
    let cert = ample_check(fan, divisor, config.seed)?;
    if !cert.ample {
        return Err(Error::InvalidInput(format!(
            "divisor is not ample; failing wall {:?}",
            cert.failing_wall
        )));
    }
    let n = fan.rank();
    let mut tables = Vec::new();
    let mut violations = Vec::new();
    for p_form in 0..=n {
        let t = cohomology_dims(fan, p_form, divisor, box_override.clone(), config)?;
        for (q, e) in t.h.iter().enumerate() {
            if q > 0 && e.lo != 0 && t.sound {
                violations.push((p_form, q, e.lo));
            }
        }
        tables.push(t);
    }
    let all_sound = tables.iter().all(|t| t.sound);
    let pass = violations.is_empty() && all_sound;
    Ok(BottReport {
        prime: config.prime,
        divisor: divisor.coeffs.clone(),
        tables,
        violations,
        all_sound,
        pass,
    })
}

/// Hypercohomology of the total Čech–de Rham complex at one grade: rows are
/// Čech levels, columns are form degrees, total differential `δ + (-1)^s d`.
fn grade_hyper(
    fan: &Fan,
    cover: &Cover,
    cache: &SpaceCache,
    u: &[i64],
    p: u64,
    max_dense: usize,
) -> Vec<u64> {
    let n = fan.rank();
    let zero = Divisor::zero(fan);
    let total_len = cover.levels + n;
    let mut spaces: HashMap<(usize, usize), &Subspace> = HashMap::new();
    for (ci, (_, cone)) in cover.chains.iter().enumerate() {
        let ray_ids = fan.cone_rays(*cone);
        for j in 0..=n {
            if let Some(s) = cache.space(*cone, j, u, &ray_ids, &zero) {
                if s.dim() > 0 {
                    spaces.insert((ci, j), s);
                }
            }
        }
    }
    let dim_of = |ci: usize, j: usize| spaces.get(&(ci, j)).map_or(0, |s| s.dim());
    let mut offsets: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); total_len + 1];
    let mut total_dims = vec![0usize; total_len + 1];
    for m in 0..=total_len {
        let mut off = 0;
        for s in 0..cover.levels {
            if m < s || m - s > n {
                continue;
            }
            let j = m - s;
            for &ci in &cover.by_level[s] {
                let d = dim_of(ci, j);
                if d > 0 {
                    offsets[m].insert((ci, j), off);
                    off += d;
                }
            }
        }
        total_dims[m] = off;
    }
    let chain_pos: HashMap<&[usize], usize> = cover
        .chains
        .iter()
        .enumerate()
        .map(|(i, (mb, _))| (mb.as_slice(), i))
        .collect();
    let masks_per_degree: Vec<Vec<u32>> = (0..=n + 1).map(|j| multivector_masks(n, j)).collect();
    let ubar: Vec<u64> = u.iter().map(|&x| fp::reduce_i64(x, p)).collect();
    let mut ranks = vec![0usize; total_len + 1];
    for m in 0..total_len {
        if total_dims[m] == 0 || total_dims[m + 1] == 0 {
            continue;
        }
        let mut rows = vec![vec![0u64; total_dims[m + 1]]; total_dims[m]];
        for (&(ci, j), &src_off) in &offsets[m] {
            let s = cover.chains[ci].0.len() - 1;
            let sspace = spaces[&(ci, j)];
            // Čech component: every chain extending this one, same degree
            for (&(ti, tj), &tgt_off) in &offsets[m + 1] {
                if tj != j {
                    continue;
                }
                let (tmembers, _) = &cover.chains[ti];
                if tmembers.len() != s + 2 {
                    continue;
                }
                let mut found: Option<usize> = None;
                for pos in 0..tmembers.len() {
                    let mut sub = tmembers.clone();
                    sub.remove(pos);
                    if chain_pos[sub.as_slice()] == ci {
                        found = Some(pos);
                        break;
                    }
                }
                let Some(pos) = found else { continue };
                let tspace = spaces[&(ti, tj)];
                let neg = pos % 2 == 1;
                for (bi, b) in sspace.basis.iter().enumerate() {
                    let coords = tspace
                        .express(b)
                        .expect("restriction lands in larger space");
                    for (ci2, &v) in coords.iter().enumerate() {
                        if v != 0 {
                            let val = if neg { fp::neg_mod(v, p) } else { v };
                            rows[src_off + bi][tgt_off + ci2] =
                                fp::add_mod(rows[src_off + bi][tgt_off + ci2], val, p);
                        }
                    }
                }
            }
            // de Rham component: same chain, next degree, sign (-1)^s
            if j < n {
                if let (Some(&tgt_off), Some(tspace)) =
                    (offsets[m + 1].get(&(ci, j + 1)), spaces.get(&(ci, j + 1)))
                {
                    let neg = s % 2 == 1;
                    for (bi, b) in sspace.basis.iter().enumerate() {
                        let img = koszul_image(
                            p,
                            &ubar,
                            b,
                            &masks_per_degree[j],
                            &masks_per_degree[j + 1],
                        );
                        let coords = tspace
                            .express(&img)
                            .expect("differential image stays in membership space");
                        for (ci2, &v) in coords.iter().enumerate() {
                            if v != 0 {
                                let val = if neg { fp::neg_mod(v, p) } else { v };
                                rows[src_off + bi][tgt_off + ci2] =
                                    fp::add_mod(rows[src_off + bi][tgt_off + ci2], val, p);
                            }
                        }
                    }
                }
            }
        }
        ranks[m] = linalg::rank(p, &rows, max_dense);
    }
    let mut h = vec![0u64; total_len + 1];
    for m in 0..=total_len {
        let below = if m == 0 { 0 } else { ranks[m - 1] };
        let here = if m < total_len { ranks[m] } else { 0 };
        h[m] = (total_dims[m] - here - below) as u64;
    }
    h
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegenerationRow {
    pub n: usize,
    pub e1_sum: u64,
    pub hyper_dim: u64,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub prime: u64,
    pub rows: Vec<DegenerationRow>,
    pub degeneration: bool,
    pub sound: bool,
    /// f-vector Betti numbers for smooth complete fans, with the match flag.
    pub betti: Option<Vec<u64>>,
    pub betti_match: Option<bool>,
    pub degree_box: DegreeBox,
}

/// Verify degeneration at the first page: for every total degree the sum of
/// the untwisted Hodge numbers must equal the hypercohomology dimension of
/// the total complex. Cross-checks the f-vector Betti numbers on smooth
/// complete fans.
pub fn degeneration_check(
    fan: &Fan,
    box_override: Option<DegreeBox>,
    config: &SessionConfig,
) -> Result<DegenerationReport> {
    config.validate()?;
    if !fan.is_complete(config.seed)? {
        return Err(Error::InvalidInput(
            "degeneration check requires a complete fan".into(),
        ));
    }
    let n = fan.rank();
    let zero = Divisor::zero(fan);
    let degree_box = match box_override {
        Some(b) => b,
        None => default_box(fan, &zero, config)?,
    };
    let mut e1 = Vec::new();
    let mut sound = true;
    for j in 0..=n {
        let t = cohomology_dims(fan, j, &zero, Some(degree_box.clone()), config)?;
        sound &= t.sound;
        e1.push(t);
    }
    let cover = build_cover(fan, fan.maximal_cones())?;
    let used_cones: Vec<usize> = {
        let mut v: Vec<usize> = cover.chains.iter().map(|(_, c)| *c).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let p_forms: Vec<usize> = (0..=n).collect();
    let cache = build_space_cache(fan, config.prime, &p_forms, &used_cones);
    let grades: Vec<Vec<i64>> = degree_box.points().collect();
    let total_len = cover.levels + n;
    let per_grade = sweep(grades, true, |u| {
        let h = grade_hyper(fan, &cover, &cache, u, config.prime, config.max_dense_cols);
        let shell_hit = degree_box.on_shell(u) && h.iter().any(|&x| x > 0);
        (h, shell_hit)
    });
    let mut hyper = vec![0u64; total_len + 1];
    let mut shell_hits = 0;
    for (hs, hit) in per_grade {
        for (acc, v) in hyper.iter_mut().zip(hs) {
            *acc += v;
        }
        if hit {
            shell_hits += 1;
        }
    }
    sound &= shell_hits == 0;
    let mut rows = Vec::new();
    let mut degeneration = true;
    for m in 0..=total_len {
        let e1_sum: u64 = (0..=m.min(n)).map(|j| e1[j].h_at(m - j)).sum();
        let hyper_dim = hyper[m];
        let equal = e1_sum == hyper_dim;
        degeneration &= equal;
        rows.push(DegenerationRow {
            n: m,
            e1_sum,
            hyper_dim,
            equal,
        });
    }
    let (betti, betti_match) = if fan.is_smooth() {
        let b = fan.betti_numbers(config.seed)?;
        let mut ok = true;
        for (m, &hm) in hyper.iter().enumerate() {
            let expected = if m % 2 == 0 {
                b.get(m / 2).copied().unwrap_or(0)
            } else {
                0
            };
            if hm != expected {
                ok = false;
            }
        }
        (Some(b), Some(ok))
    } else {
        (None, None)
    };
    Ok(DegenerationReport {
        prime: config.prime,
        rows,
        degeneration,
        sound,
        betti,
        betti_match,
        degree_box,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitChartReport {
    pub cone: Vec<usize>,
    pub forms_checked: usize,
    pub cartier_splits: bool,
    pub duality_splits: bool,
    pub boundary_insensitive: bool,
    pub graded_cartier_identity: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitReport {
    pub prime: u64,
    pub charts: Vec<SplitChartReport>,
    pub pass: bool,
}

/// Verify the splitting identities chart by chart: `cartier ∘ sigma = id`
/// and `duality ∘ sigma = id` on seeded random chart forms (with random
/// coboundaries added to the split image), plus the graded Cartier dimension
/// identity over the default box.
pub fn splitting_verify(fan: &Fan, samples: usize, config: &SessionConfig) -> Result<SplitReport> {
    config.validate()?;
    let p = config.prime;
    let n = fan.rank();
    let zero = Divisor::zero(fan);
    let degree_box = default_box(fan, &zero, config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut charts = Vec::new();
    for (ci, cone_set) in fan.cones().iter().enumerate() {
        let ray_ids = fan.cone_rays(ci);
        let rays: Vec<Vec<i64>> = ray_ids.iter().map(|&r| fan.rays()[r].clone()).collect();
        let coeffs = vec![0i64; rays.len()];
        let mut cartier_ok = true;
        let mut duality_ok = true;
        let mut boundary_ok = true;
        let mut checked = 0;
        let mut attempts = 0;
        while checked < samples && attempts < samples * 50 {
            attempts += 1;
            let degree = rng.gen_range(0..=n);
            let Some(form) =
                random_chart_form(&mut rng, p, n, degree, &rays, &coeffs, &degree_box)
            else {
                continue;
            };
            checked += 1;
            let split = form.sigma_split();
            if split.cartier() != form {
                cartier_ok = false;
            }
            match split.duality_split() {
                Ok(s) if s == form => {}
                _ => duality_ok = false,
            }
            if degree > 0 {
                if let Some(beta) =
                    random_chart_form(&mut rng, p, n, degree - 1, &rays, &coeffs, &degree_box)
                {
                    let noisy = split.add(&beta.d()).expect("degree match");
                    match noisy.duality_split() {
                        Ok(s) if s == form => {}
                        _ => boundary_ok = false,
                    }
                }
            }
        }
        let mut graded_ok = true;
        for u in degree_box.points() {
            for i in 0..=n {
                let member_dim = match section_space(p, n, i, &rays, &coeffs, &u) {
                    None => 0,
                    Some(s) => s.dim(),
                };
                let pu: Vec<i64> = u.iter().map(|&x| x * p as i64).collect();
                let (z, b) = zb_subspaces(p, n, i, &rays, &pu);
                if z.dim() - b.dim() != member_dim {
                    graded_ok = false;
                }
            }
        }
        charts.push(SplitChartReport {
            cone: cone_set.iter().copied().collect(),
            forms_checked: checked,
            cartier_splits: cartier_ok,
            duality_splits: duality_ok,
            boundary_insensitive: boundary_ok,
            graded_cartier_identity: graded_ok,
        });
    }
    let pass = charts.iter().all(|c| {
        c.forms_checked > 0
            && c.cartier_splits
            && c.duality_splits
            && c.boundary_insensitive
            && c.graded_cartier_identity
    });
    Ok(SplitReport {
        prime: p,
        charts,
        pass,
    })
}

/// A random nonzero form supported on chart-member grades inside the box.
fn random_chart_form(
    rng: &mut ChaCha8Rng,
    p: u64,
    rank: usize,
    degree: usize,
    rays: &[Vec<i64>],
    coeffs: &[i64],
    degree_box: &DegreeBox,
) -> Option<TorusForm> {
    let masks = multivector_masks(rank, degree);
    let mut entries: Vec<(Vec<i64>, u32, i64)> = Vec::new();
    for _ in 0..40 {
        let u: Vec<i64> = degree_box
            .lo
            .iter()
            .zip(&degree_box.hi)
            .map(|(&lo, &hi)| rng.gen_range(lo..=hi))
            .collect();
        let space = match section_space(p, rank, degree, rays, coeffs, &u) {
            Some(s) if s.dim() > 0 => s,
            _ => continue,
        };
        let mut vec = vec![0u64; masks.len()];
        for b in &space.basis {
            let c = rng.gen_range(0..p);
            for (r, &bv) in b.iter().enumerate() {
                vec[r] = fp::add_mod(vec[r], fp::mul_mod(c, bv, p), p);
            }
        }
        for (i, &m) in masks.iter().enumerate() {
            if vec[i] != 0 {
                entries.push((u.clone(), m, vec[i] as i64));
            }
        }
        if entries.len() >= 2 {
            break;
        }
    }
    if entries.is_empty() {
        return None;
    }
    let form = TorusForm::from_terms(p, rank, degree, entries).ok()?;
    debug_assert!(is_section(&form, rays, coeffs));
    (!form.is_zero()).then_some(form)
}
