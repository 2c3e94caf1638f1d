//! Exact lattice convex geometry: cones, duals, faces, fans and the
//! predicates the cohomology engines rely on.
//!
//! Cones store primitive, irredundant, sorted generator lists. For strongly
//! convex cones that normal form is canonical (the extreme rays), so derived
//! equality is genuine set equality; cones with lines are compared with
//! [`Cone::set_eq`].

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat;

/// Largest ambient rank accepted at desk scale.
pub const MAX_RANK: usize = 6;
/// Largest coordinate magnitude accepted in lattice points.
pub const MAX_COORD: i64 = 1 << 20;

pub type LatticePoint = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeTag {
    /// The cocharacter lattice (fans live here).
    N,
    /// The character lattice (semigroups and gradings live here).
    M,
}

impl LatticeTag {
    pub fn dual(self) -> LatticeTag {
        match self {
            LatticeTag::N => LatticeTag::M,
            LatticeTag::M => LatticeTag::N,
        }
    }
}

fn check_point(v: &[i64], rank: usize) -> Result<()> {
    if v.len() != rank {
        return Err(Error::InvalidInput(format!(
            "point {:?} has length {}, expected rank {}",
            v,
            v.len(),
            rank
        )));
    }
    if v.iter().any(|&x| x.abs() > MAX_COORD) {
        return Err(Error::Capacity(format!(
            "coordinate magnitude exceeds {} in {:?}",
            MAX_COORD, v
        )));
    }
    Ok(())
}

fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::Capacity(format!(
            "ambient rank {} outside supported range 1..={}",
            rank, MAX_RANK
        )));
    }
    Ok(())
}

/// Combine `a*x + b*y` in i128 and return the primitive integer direction.
fn combine_primitive(a: i128, x: &[i64], b: i128, y: &[i64]) -> Result<Vec<i64>> {
    let raw: Vec<i128> = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| a * xi as i128 + b * yi as i128)
        .collect();
    let g = raw.iter().fold(0i128, |acc, &v| intmat::gcd(acc, v));
    let g = if g == 0 { 1 } else { g };
    raw.iter()
        .map(|&v| {
            i64::try_from(v / g)
                .map_err(|_| Error::Capacity("generator coordinates overflow".into()))
        })
        .collect()
}

/// Double description: generators of `{ u : <u, a> >= 0 for all a in normals }`
/// as a (lineality basis, extreme rays) pair.
fn dual_description(
    rank: usize,
    normals: &[Vec<i64>],
    max_rays: usize,
) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    if normals.len() > 63 {
        return Err(Error::Capacity(format!(
            "too many halfspaces for dual enumeration: {}",
            normals.len()
        )));
    }
    let mut lineality: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    // (ray, tight-set bitmask over processed constraint indices)
    let mut rays: Vec<(Vec<i64>, u64)> = Vec::new();
    for (j, a) in normals.iter().enumerate() {
        let bit = 1u64 << j;
        let lin_hit = lineality.iter().position(|l| intmat::dot(l, a) != 0);
        if let Some(idx) = lin_hit {
            let mut l0 = lineality.swap_remove(idx);
            let mut d0 = intmat::dot(&l0, a);
            if d0 < 0 {
                l0 = intmat::neg(&l0);
                d0 = -d0;
            }
            let mut new_lin = Vec::with_capacity(lineality.len());
            for l in &lineality {
                let d = intmat::dot(l, a);
                if d == 0 {
                    new_lin.push(l.clone());
                } else {
                    new_lin.push(combine_primitive(d0, l, -d, &l0)?);
                }
            }
            lineality = new_lin;
            let mut new_rays = Vec::with_capacity(rays.len() + 1);
            for (r, tight) in &rays {
                let d = intmat::dot(r, a);
                let moved = if d == 0 {
                    r.clone()
                } else {
                    combine_primitive(d0, r, -d, &l0)?
                };
                new_rays.push((moved, tight | bit));
            }
            // the consumed lineality direction becomes a ray; it is tight at
            // every constraint processed so far
            new_rays.push((l0, bit - 1));
            rays = new_rays;
        } else {
            let ds: Vec<i128> = rays.iter().map(|(r, _)| intmat::dot(r, a)).collect();
            let mut keep: Vec<(Vec<i64>, u64)> = Vec::new();
            for (i, (r, tight)) in rays.iter().enumerate() {
                if ds[i] > 0 {
                    keep.push((r.clone(), *tight));
                } else if ds[i] == 0 {
                    keep.push((r.clone(), tight | bit));
                }
            }
            for (ip, (rp, tp)) in rays.iter().enumerate() {
                if ds[ip] <= 0 {
                    continue;
                }
                for (im, (rm, tm)) in rays.iter().enumerate() {
                    if ds[im] >= 0 {
                        continue;
                    }
                    let common = tp & tm;
                    let adjacent = rays.iter().enumerate().all(|(k, (_, tk))| {
                        k == ip || k == im || (tk & common) != common
                    });
                    if adjacent {
                        let newr = combine_primitive(ds[ip], rm, -ds[im], rp)?;
                        keep.push((newr, common | bit));
                    }
                }
            }
            if keep.len() > max_rays {
                return Err(Error::Capacity(format!(
                    "dual enumeration exceeded {} rays",
                    max_rays
                )));
            }
            rays = keep;
        }
    }
    Ok((lineality, rays.into_iter().map(|(r, _)| r).collect()))
}

/// Generators of the dual cone of `cone(gens)`; lineality directions appear
/// as +/- pairs.
fn dual_generators(rank: usize, gens: &[Vec<i64>], max_rays: usize) -> Result<Vec<Vec<i64>>> {
    let (lin, rays) = dual_description(rank, gens, max_rays)?;
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(2 * lin.len() + rays.len());
    for l in lin {
        out.push(intmat::neg(&l));
        out.push(l);
    }
    out.extend(rays);
    out.iter_mut().for_each(|v| *v = intmat::primitive(v));
    out.sort();
    out.dedup();
    Ok(out)
}

/// A rational polyhedral cone given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cone {
    rank: usize,
    tag: LatticeTag,
    gens: Vec<Vec<i64>>,
    dual_gens: Vec<Vec<i64>>,
}

impl Cone {
    /// Normalizing constructor: generators are made primitive, deduplicated,
    /// irredundant and sorted; the dual description is computed eagerly so
    /// membership tests are linear scans afterwards.
    pub fn new(rank: usize, tag: LatticeTag, gens: Vec<Vec<i64>>) -> Result<Cone> {
        Cone::with_caps(rank, tag, gens, 4096)
    }

    pub fn with_caps(
        rank: usize,
        tag: LatticeTag,
        gens: Vec<Vec<i64>>,
        max_rays: usize,
    ) -> Result<Cone> {
        check_rank(rank)?;
        let mut prim: Vec<Vec<i64>> = Vec::new();
        for g in &gens {
            check_point(g, rank)?;
            let p = intmat::primitive(g);
            if !intmat::is_zero_vec(&p) {
                prim.push(p);
            }
        }
        prim.sort();
        prim.dedup();
        // drop generators that are nonnegative combinations of the others
        let mut keep = prim.clone();
        let mut i = 0;
        while i < keep.len() {
            let mut rest = keep.clone();
            let g = rest.remove(i);
            let dual = dual_generators(rank, &rest, max_rays)?;
            let contained = dual.iter().all(|u| intmat::dot(u, &g) >= 0);
            if contained {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        let dual_gens = dual_generators(rank, &keep, max_rays)?;
        Ok(Cone {
            rank,
            tag,
            gens: keep,
            dual_gens,
        })
    }

    pub fn zero(rank: usize, tag: LatticeTag) -> Cone {
        Cone::new(rank, tag, Vec::new()).expect("zero cone is always valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tag(&self) -> LatticeTag {
        self.tag
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn dual_generators(&self) -> &[Vec<i64>] {
        &self.dual_gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        intmat::rank(&self.gens)
    }

    /// The dual cone, recomputed honestly (so the double-dual test is real).
    pub fn dual(&self) -> Result<Cone> {
        Cone::new(self.rank, self.tag.dual(), self.dual_gens.clone())
    }

    /// Exact membership via the eager dual description.
    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.rank && self.dual_gens.iter().all(|u| intmat::dot(u, x) >= 0)
    }

    /// Set equality as cones, decided by mutual generator membership.
    pub fn set_eq(&self, other: &Cone) -> bool {
        self.rank == other.rank
            && self.gens.iter().all(|g| other.contains(g))
            && other.gens.iter().all(|g| self.contains(g))
    }

    /// True iff the cone contains no line: no generator's negation lies in
    /// the cone.
    pub fn is_strongly_convex(&self) -> bool {
        self.gens.iter().all(|g| !self.contains(&intmat::neg(g)))
    }

    /// True iff the primitive generators extend to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        let s = self.gens.len();
        if s == 0 {
            return true;
        }
        if intmat::rank(&self.gens) < s {
            return false;
        }
        intmat::maximal_minor_gcd(&self.gens).abs() == 1
    }

    /// All faces (including the zero cone and the cone itself). Requires a
    /// strongly convex cone; faces are generated by the generator subsets
    /// annihilated by dual elements.
    pub fn faces(&self) -> Result<Vec<Cone>> {
        if !self.is_strongly_convex() {
            return Err(Error::InvalidInput(
                "faces() requires a strongly convex cone".into(),
            ));
        }
        let d = self.dual_gens.len();
        if d > 16 {
            return Err(Error::Capacity(format!(
                "face enumeration over 2^{} dual subsets",
                d
            )));
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for subset in 0u32..(1 << d) {
            let mut annihilated: Vec<usize> = Vec::new();
            'gen: for (gi, g) in self.gens.iter().enumerate() {
                for k in 0..d {
                    if subset & (1 << k) != 0 && intmat::dot(&self.dual_gens[k], g) != 0 {
                        continue 'gen;
                    }
                }
                annihilated.push(gi);
            }
            seen.insert(annihilated);
        }
        seen.into_iter()
            .map(|idxs| {
                let gens = idxs.iter().map(|&i| self.gens[i].clone()).collect();
                Cone::new(self.rank, self.tag, gens)
            })
            .collect()
    }

    /// Intersection of two cones, via the dual of the joined duals.
    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.rank != other.rank || self.tag != other.tag {
            return Err(Error::InvalidInput(
                "cannot intersect cones in different lattices".into(),
            ));
        }
        let mut joint = self.dual_gens.clone();
        joint.extend(other.dual_gens.iter().cloned());
        let gens = dual_generators(self.rank, &joint, 4096)?;
        // gens generate the dual of (self^v + other^v), i.e. the intersection
        Cone::new(self.rank, self.tag, gens)
    }

    /// Basis of the largest linear subspace contained in the cone.
    pub fn lineality_basis(&self) -> Vec<Vec<i64>> {
        let in_line: Vec<Vec<i64>> = self
            .gens
            .iter()
            .filter(|g| self.contains(&intmat::neg(g)))
            .cloned()
            .collect();
        intmat::row_hnf(&in_line)
    }
}

/// Minimal generating set of the semigroup `c ∩ M`.
///
/// Lines contribute +/- pairs of a canonical lattice basis; the pointed part
/// is handled by graded enumeration of irreducibles inside the zonotope
/// degree bound.
pub fn hilbert_basis(c: &Cone, max_box_points: usize) -> Result<Vec<Vec<i64>>> {
    let n = c.rank();
    if c.is_zero() {
        return Ok(Vec::new());
    }
    let lin = c.lineality_basis();
    if lin.is_empty() {
        return hilbert_basis_pointed(c, max_box_points);
    }
    // split off units: project to the quotient by the lineality lattice,
    // compute there, and lift back canonically
    let pi = intmat::kernel_basis(&lin, n);
    let k = pi.len(); // quotient rank
    let mut out: Vec<Vec<i64>> = Vec::new();
    for l in &lin {
        out.push(l.clone());
        out.push(intmat::neg(l));
    }
    if k > 0 {
        let proj = |v: &[i64]| -> Vec<i64> {
            pi.iter()
                .map(|row| {
                    i64::try_from(intmat::dot(row, v)).expect("projection overflow")
                })
                .collect()
        };
        let qgens: Vec<Vec<i64>> = c.generators().iter().map(|g| proj(g)).collect();
        let qcone = Cone::new(k, c.tag(), qgens)?;
        debug_assert!(qcone.is_strongly_convex());
        for h in hilbert_basis_pointed(&qcone, max_box_points)? {
            let lift = intmat::preimage(&pi, &h, n)
                .ok_or_else(|| Error::InternalInconsistency("quotient lift failed".into()))?;
            out.push(intmat::reduce_mod_hnf(&lift, &lin));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn hilbert_basis_pointed(c: &Cone, max_box_points: usize) -> Result<Vec<Vec<i64>>> {
    let n = c.rank();
    let gens = c.generators();
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    // strictly positive grading: sum of dual generators
    let mut w = vec![0i64; n];
    for u in c.dual_generators() {
        for i in 0..n {
            w[i] += u[i];
        }
    }
    let degs: Vec<i128> = gens.iter().map(|g| intmat::dot(&w, g)).collect();
    if degs.iter().any(|&d| d <= 0) {
        return Err(Error::InternalInconsistency(
            "positive grading failed on a pointed cone".into(),
        ));
    }
    let dmax: i128 = degs.iter().sum();
    // coordinate box for { sum t_i g_i : t_i >= 0, sum t_i deg_i <= dmax }
    let mut lo = vec![0i128; n];
    let mut hi = vec![0i128; n];
    for (g, &dg) in gens.iter().zip(&degs) {
        for i in 0..n {
            let reach = g[i] as i128 * dmax;
            // t_i ranges in [0, dmax/deg]; round outward
            if reach >= 0 {
                hi[i] += reach / dg + if reach % dg != 0 { 1 } else { 0 };
            } else {
                let r = -reach;
                lo[i] -= r / dg + if r % dg != 0 { 1 } else { 0 };
            }
        }
    }
    let lo: Vec<i64> = lo.iter().map(|&x| x as i64).collect();
    let hi: Vec<i64> = hi.iter().map(|&x| x as i64).collect();
    let volume: i128 = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| (b - a + 1) as i128)
        .product();
    if volume > max_box_points as i128 {
        return Err(Error::Capacity(format!(
            "semigroup enumeration box of {} points exceeds cap {}",
            volume, max_box_points
        )));
    }
    // all semigroup points of degree <= dmax, grouped by degree
    let mut by_degree: BTreeMap<i128, Vec<Vec<i64>>> = BTreeMap::new();
    let mut points: BTreeSet<Vec<i64>> = BTreeSet::new();
    for pt in BoxIter::new(&lo, &hi) {
        if intmat::is_zero_vec(&pt) || !c.contains(&pt) {
            continue;
        }
        let d = intmat::dot(&w, &pt);
        if d > 0 && d <= dmax {
            by_degree.entry(d).or_default().push(pt.clone());
            points.insert(pt);
        }
    }
    // a point is irreducible iff it is not a sum of two lower-degree points
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for (_, pts) in &by_degree {
        'point: for x in pts {
            for y in &basis {
                let rem: Vec<i64> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
                if intmat::is_zero_vec(&rem) {
                    continue;
                }
                if points.contains(&rem) {
                    continue 'point;
                }
            }
            basis.push(x.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

/// Odometer iterator over the integer points of a coordinate box.
pub struct BoxIter {
    lo: Vec<i64>,
    hi: Vec<i64>,
    cur: Option<Vec<i64>>,
}

impl BoxIter {
    pub fn new(lo: &[i64], hi: &[i64]) -> BoxIter {
        let ok = lo.iter().zip(hi).all(|(a, b)| a <= b);
        BoxIter {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            cur: ok.then(|| lo.to_vec()),
        }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.cur.clone()?;
        let mut next = cur.clone();
        let mut i = 0;
        loop {
            if i == next.len() {
                self.cur = None;
                break;
            }
            if next[i] < self.hi[i] {
                next[i] += 1;
                self.cur = Some(next);
                break;
            }
            next[i] = self.lo[i];
            i += 1;
        }
        Some(cur)
    }
}

/// A fan: primitive rays plus the face-closed collection of strongly convex
/// cones, each recorded as a set of ray indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<BTreeSet<usize>>,
    cone_objs: Vec<Cone>,
    maximal: Vec<usize>,
    /// Set when input rays needed primitivization.
    pub normalized_rays: bool,
}

impl Fan {
    /// Validating constructor. Face closure is added automatically; the
    /// pairwise intersection axiom is checked by honest cone intersection.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, input_cones: Vec<Vec<usize>>) -> Result<Fan> {
        check_rank(rank)?;
        let mut normalized = false;
        let mut prim_rays: Vec<Vec<i64>> = Vec::with_capacity(rays.len());
        for r in &rays {
            check_point(r, rank)?;
            if intmat::is_zero_vec(r) {
                return Err(Error::InvalidInput("zero vector listed as a ray".into()));
            }
            let p = intmat::primitive(r);
            if &p != r {
                normalized = true;
            }
            prim_rays.push(p);
        }
        for i in 0..prim_rays.len() {
            for j in i + 1..prim_rays.len() {
                if prim_rays[i] == prim_rays[j] {
                    return Err(Error::InvalidInput(format!(
                        "rays {} and {} coincide after normalization",
                        i, j
                    )));
                }
            }
        }
        let mut used = vec![false; prim_rays.len()];
        let mut cone_sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let ray_index: BTreeMap<Vec<i64>, usize> = prim_rays
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let mut toplevel: Vec<(BTreeSet<usize>, Cone)> = Vec::new();
        for set in &input_cones {
            let idxs: BTreeSet<usize> = set.iter().copied().collect();
            for &i in &idxs {
                if i >= prim_rays.len() {
                    return Err(Error::InvalidInput(format!("cone refers to unknown ray {}", i)));
                }
                used[i] = true;
            }
            let gens: Vec<Vec<i64>> = idxs.iter().map(|&i| prim_rays[i].clone()).collect();
            let cone = Cone::new(rank, LatticeTag::N, gens.clone())?;
            if !cone.is_strongly_convex() {
                return Err(Error::InvalidInput(format!(
                    "cone {:?} is not strongly convex",
                    idxs
                )));
            }
            if cone.generators().len() != idxs.len() {
                return Err(Error::InvalidInput(format!(
                    "cone {:?} lists a redundant ray",
                    idxs
                )));
            }
            cone_sets.insert(idxs.clone());
            toplevel.push((idxs, cone));
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidInput(format!(
                "ray {} is not used by any cone",
                i
            )));
        }
        // face closure
        for (_, cone) in &toplevel {
            for face in cone.faces()? {
                let idxs: BTreeSet<usize> = face
                    .generators()
                    .iter()
                    .map(|g| *ray_index.get(g).expect("face generator is a fan ray"))
                    .collect();
                cone_sets.insert(idxs);
            }
        }
        let cones: Vec<BTreeSet<usize>> = {
            let mut v: Vec<BTreeSet<usize>> = cone_sets.into_iter().collect();
            v.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
            v
        };
        let cone_objs: Vec<Cone> = cones
            .iter()
            .map(|s| {
                let gens = s.iter().map(|&i| prim_rays[i].clone()).collect();
                Cone::new(rank, LatticeTag::N, gens)
            })
            .collect::<Result<_>>()?;
        // intersection axiom, checked geometrically for every pair
        let face_lists: Vec<Vec<usize>> = cones
            .iter()
            .enumerate()
            .map(|(ci, set)| {
                (0..cones.len())
                    .filter(|&fi| {
                        cones[fi].is_subset(set)
                            && cone_objs[ci]
                                .faces()
                                .map(|fs| fs.iter().any(|f| f.set_eq(&cone_objs[fi])))
                                .unwrap_or(false)
                    })
                    .collect()
            })
            .collect();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let inter = cone_objs[i].intersect(&cone_objs[j])?;
                let listed = (0..cones.len()).find(|&k| cone_objs[k].set_eq(&inter));
                let ok = match listed {
                    Some(k) => face_lists[i].contains(&k) && face_lists[j].contains(&k),
                    None => false,
                };
                if !ok {
                    return Err(Error::FanAxiomViolation {
                        left: i,
                        right: j,
                        detail: format!(
                            "intersection generated by {:?} is not a common listed face",
                            inter.generators()
                        ),
                    });
                }
            }
        }
        let maximal: Vec<usize> = (0..cones.len())
            .filter(|&i| {
                !(0..cones.len()).any(|j| j != i && cones[i].is_subset(&cones[j]))
            })
            .collect();
        Ok(Fan {
            rank,
            rays: prim_rays,
            cones,
            cone_objs,
            maximal,
            normalized_rays: normalized,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[BTreeSet<usize>] {
        &self.cones
    }

    pub fn cone(&self, idx: usize) -> &Cone {
        &self.cone_objs[idx]
    }

    pub fn maximal_cones(&self) -> &[usize] {
        &self.maximal
    }

    pub fn cone_index(&self, rayset: &BTreeSet<usize>) -> Option<usize> {
        self.cones.iter().position(|s| s == rayset)
    }

    /// Rays of the cone at `idx`, in ray-index order.
    pub fn cone_rays(&self, idx: usize) -> Vec<usize> {
        self.cones[idx].iter().copied().collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal
            .iter()
            .all(|&i| intmat::rank(self.cone_objs[i].generators()) == self.cones[i].len())
    }

    pub fn is_smooth(&self) -> bool {
        self.maximal.iter().all(|&i| self.cone_objs[i].is_smooth())
    }

    /// Completeness: facet pairing plus seeded random direction sampling;
    /// the two must agree or an internal-inconsistency error is raised.
    pub fn is_complete(&self, seed: u64) -> Result<bool> {
        let facet_test = self.facet_pairing_complete();
        let sample_test = self.sampled_complete(seed, 120);
        if facet_test != sample_test {
            return Err(Error::InternalInconsistency(format!(
                "completeness checks disagree: facet pairing {}, sampling {}",
                facet_test, sample_test
            )));
        }
        Ok(facet_test)
    }

    fn facet_pairing_complete(&self) -> bool {
        let n = self.rank;
        if !self.maximal.iter().all(|&i| self.cone_objs[i].dim() == n) {
            return false;
        }
        // every (n-1)-dimensional cone lies in exactly two maximal cones
        for (i, _set) in self.cones.iter().enumerate() {
            if self.cone_objs[i].dim() != n - 1 {
                continue;
            }
            let count = self
                .maximal
                .iter()
                .filter(|&&m| self.cones[i].is_subset(&self.cones[m]))
                .count();
            if count != 2 {
                return false;
            }
        }
        true
    }

    fn sampled_complete(&self, seed: u64, samples: usize) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = 50i64;
        let mut tried = 0;
        while tried < samples {
            let v: Vec<i64> = (0..self.rank).map(|_| rng.gen_range(-bound..=bound)).collect();
            if intmat::is_zero_vec(&v) {
                continue;
            }
            tried += 1;
            let covered = self
                .maximal
                .iter()
                .any(|&m| self.cone_objs[m].contains(&v));
            if !covered {
                return false;
            }
        }
        true
    }

    /// Even Betti numbers `b_0, b_2, ..., b_2n` of the associated variety for
    /// a complete simplicial fan, from the f-vector:
    /// `b_2p = sum_{k >= p} (-1)^(k-p) C(k, p) d_{n-k}` with `d_j` the number
    /// of `j`-dimensional cones.
    pub fn betti_numbers(&self, seed: u64) -> Result<Vec<u64>> {
        if !self.is_complete(seed)? {
            return Err(Error::InvalidInput(
                "Betti numbers require a complete fan".into(),
            ));
        }
        if !self.is_simplicial() {
            return Err(Error::InvalidInput(
                "Betti numbers require a simplicial fan".into(),
            ));
        }
        let n = self.rank;
        let mut d = vec![0i128; n + 1];
        for (i, _) in self.cones.iter().enumerate() {
            d[self.cone_objs[i].dim()] += 1;
        }
        let mut betti = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let mut b = 0i128;
            for k in p..=n {
                let sign = if (k - p) % 2 == 0 { 1 } else { -1 };
                b += sign * binom_i128(k as i128, p as i128) * d[n - k];
            }
            if b < 0 {
                return Err(Error::InternalInconsistency(format!(
                    "negative Betti number b_{} = {}",
                    2 * p,
                    b
                )));
            }
            betti.push(b as u64);
        }
        Ok(betti)
    }
}

fn binom_i128(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cone2(gens: &[[i64; 2]]) -> Cone {
        Cone::new(2, LatticeTag::N, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dual_of_orthant_is_orthant() {
        let c = cone2(&[[1, 0], [0, 1]]);
        let d = c.dual().unwrap();
        assert_eq!(d.generators(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn dual_of_skew_cone() {
        let c = cone2(&[[1, 0], [1, 2]]);
        let d = c.dual().unwrap();
        let mut gens = d.generators().to_vec();
        gens.sort();
        assert_eq!(gens, vec![vec![0, 1], vec![2, -1]]);
    }

    #[test]
    fn dual_of_zero_cone_is_everything() {
        let c = Cone::zero(2, LatticeTag::N);
        let d = c.dual().unwrap();
        let mut gens = d.generators().to_vec();
        gens.sort();
        assert_eq!(
            gens,
            vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn double_dual_is_identity_on_sets() {
        for gens in [
            vec![vec![1, 0], vec![1, 2]],
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![2, 1]],
            vec![],
        ] {
            let c = Cone::new(2, LatticeTag::N, gens).unwrap();
            let dd = c.dual().unwrap().dual().unwrap();
            assert!(c.set_eq(&dd), "double dual changed {:?}", c.generators());
        }
    }

    /// Brute-force box-membership oracle for the dual: u belongs to the dual
    /// iff it pairs nonnegatively with every generator.
    #[test]
    fn dual_matches_brute_force_box() {
        let c = cone2(&[[1, 0], [1, 2]]);
        let d = c.dual().unwrap();
        for pt in BoxIter::new(&[-4, -4], &[4, 4]) {
            let direct = c.generators().iter().all(|g| intmat::dot(&pt, g) >= 0);
            assert_eq!(d.contains(&pt), direct, "point {:?}", pt);
        }
    }

    #[test]
    fn strong_convexity() {
        assert!(cone2(&[[1, 0], [0, 1]]).is_strongly_convex());
        assert!(!cone2(&[[1, 0], [-1, 0]]).is_strongly_convex());
        assert!(cone2(&[[1, 0], [1, 2], [-1, 1]]).is_strongly_convex());
    }

    #[test]
    fn smoothness() {
        assert!(cone2(&[[1, 0], [0, 1]]).is_smooth());
        assert!(!cone2(&[[1, 0], [1, 2]]).is_smooth());
        assert!(!cone2(&[[1, 0], [-1, -2]]).is_smooth());
        // a single primitive ray is smooth
        assert!(cone2(&[[2, 3]]).is_smooth());
        // dependent generators are not
        assert!(!cone2(&[[1, 0], [0, 1], [1, 1]]).is_smooth() || cone2(&[[1, 0], [0, 1], [1, 1]]).generators().len() == 2);
    }

    #[test]
    fn faces_of_orthant() {
        let c = cone2(&[[1, 0], [0, 1]]);
        let faces = c.faces().unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.is_strongly_convex()));
        let dims: Vec<usize> = faces.iter().map(|f| f.dim()).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 1);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 1);
    }

    #[test]
    fn faces_of_ray_and_skew() {
        let r = cone2(&[[1, 0]]);
        assert_eq!(r.faces().unwrap().len(), 2);
        let c = cone2(&[[1, 0], [1, 2]]);
        assert_eq!(c.faces().unwrap().len(), 4);
    }

    #[test]
    fn hilbert_basis_examples() {
        let orthant = Cone::new(2, LatticeTag::M, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            hilbert_basis(&orthant, 1_000_000).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        let skew = Cone::new(2, LatticeTag::M, vec![vec![0, 1], vec![2, -1]]).unwrap();
        assert_eq!(
            hilbert_basis(&skew, 1_000_000).unwrap(),
            vec![vec![0, 1], vec![1, 0], vec![2, -1]]
        );
        let full_line = Cone::new(1, LatticeTag::M, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(
            hilbert_basis(&full_line, 1_000_000).unwrap(),
            vec![vec![-1], vec![1]]
        );
    }

    /// Oracle: every semigroup point in a test box must be a nonnegative
    /// integer combination of the basis, generated by BFS inside the box.
    #[test]
    fn hilbert_basis_regenerates_box_points() {
        for gens in [
            vec![vec![0, 1], vec![2, -1]],
            vec![vec![1, 0], vec![1, 3]],
            vec![vec![1, 0], vec![0, 1], vec![-1, 2]],
        ] {
            let c = Cone::new(2, LatticeTag::M, gens).unwrap();
            let basis = hilbert_basis(&c, 1_000_000).unwrap();
            let lo = vec![-6, -6];
            let hi = vec![6, 6];
            let mut reachable: BTreeSet<Vec<i64>> = BTreeSet::new();
            let mut frontier = vec![vec![0i64, 0]];
            reachable.insert(vec![0, 0]);
            while let Some(x) = frontier.pop() {
                for b in &basis {
                    let y: Vec<i64> = x.iter().zip(b).map(|(&a, &c)| a + c).collect();
                    if y.iter().zip(&lo).all(|(&v, &l)| v >= l)
                        && y.iter().zip(&hi).all(|(&v, &h)| v <= h)
                        && reachable.insert(y.clone())
                    {
                        frontier.push(y);
                    }
                }
            }
            for pt in BoxIter::new(&[-3, -3], &[3, 3]) {
                if c.contains(&pt) {
                    assert!(
                        reachable.contains(&pt),
                        "{:?} not generated for cone {:?}",
                        pt,
                        c.generators()
                    );
                }
            }
        }
    }

    #[test]
    fn validate_p2_fan() {
        let fan = fixtures::fan_p2().unwrap();
        assert_eq!(fan.cones().len(), 7);
        assert_eq!(fan.maximal_cones().len(), 3);
        assert!(fan.is_complete(0).unwrap());
        assert!(fan.is_smooth());
    }

    #[test]
    fn affine_fan_is_valid_but_incomplete() {
        let fan = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(fan.maximal_cones().len(), 1);
        assert!(!fan.is_complete(0).unwrap());
    }

    #[test]
    fn fan_axiom_violation_detected() {
        let err = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap_err();
        match err {
            Error::FanAxiomViolation { .. } => {}
            other => panic!("expected fan axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn nonprimitive_ray_normalized_with_warning() {
        let fan = Fan::new(2, vec![vec![2, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(fan.normalized_rays);
        assert_eq!(fan.rays()[0], vec![1, 0]);
    }

    #[test]
    fn completeness_examples() {
        assert!(fixtures::fan_p1().unwrap().is_complete(7).unwrap());
        assert!(fixtures::fan_p1xp1().unwrap().is_complete(7).unwrap());
        assert!(fixtures::fan_hirzebruch(1).unwrap().is_complete(7).unwrap());
        assert!(fixtures::fan_p112().unwrap().is_complete(7).unwrap());
    }

    #[test]
    fn betti_oracle_values() {
        assert_eq!(fixtures::fan_p2().unwrap().betti_numbers(0).unwrap(), vec![1, 1, 1]);
        assert_eq!(fixtures::fan_p1().unwrap().betti_numbers(0).unwrap(), vec![1, 1]);
        assert_eq!(
            fixtures::fan_p1xp1().unwrap().betti_numbers(0).unwrap(),
            vec![1, 2, 1]
        );
        assert_eq!(
            fixtures::fan_hirzebruch(1).unwrap().betti_numbers(0).unwrap(),
            vec![1, 2, 1]
        );
        // non-complete fans are rejected
        let affine = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(affine.betti_numbers(0).is_err());
    }

    #[test]
    fn p3_fan_counts() {
        let fan = fixtures::fan_pn(3).unwrap();
        assert_eq!(fan.maximal_cones().len(), 4);
        assert!(fan.is_complete(0).unwrap());
        assert_eq!(fan.betti_numbers(0).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn p112_smoothness_pattern() {
        let fan = fixtures::fan_p112().unwrap();
        assert!(!fan.is_smooth());
        assert!(fan.is_simplicial());
        // exactly one singular maximal cone
        let singular: Vec<usize> = fan
            .maximal_cones()
            .iter()
            .copied()
            .filter(|&i| !fan.cone(i).is_smooth())
            .collect();
        assert_eq!(singular.len(), 1);
    }

    #[test]
    fn intersection_of_fan_cones_is_common_rayset() {
        let fan = fixtures::fan_p2().unwrap();
        let m = fan.maximal_cones();
        for &i in m {
            for &j in m {
                if i == j {
                    continue;
                }
                let inter = fan.cone(i).intersect(fan.cone(j)).unwrap();
                let common: BTreeSet<usize> = fan.cones()[i]
                    .intersection(&fan.cones()[j])
                    .copied()
                    .collect();
                let idx = fan.cone_index(&common).unwrap();
                assert!(inter.set_eq(fan.cone(idx)));
            }
        }
    }
}
