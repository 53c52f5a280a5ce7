//! Focal points: join-closures of a support, and the zeta/Möbius transforms
//! restricted to them.
//!
//! For a set function `f` on `(2^Ω, ≤)`, every image of `f` and of its zeta
//! transform `g` is determined by the values of `g` on the join-closure of
//! `supp(f)`. Off that set `f` is zero and `g` equals its value at the
//! largest focal point below (or the neutral when there is none). The
//! Möbius inversion then only needs the order restricted to the focal points.

use std::collections::{HashMap, HashSet};
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::FrameOfDiscernment;
use crate::lattice::{self, NAIVE_MAX_N};
use crate::mask::SubsetMask;
use crate::order::OrderDirection;
use crate::par;
use crate::set_function::{Role, SetFunction, SUPPORT_EPS};

/// Largest frame for which partitions are checked against the whole powerset.
pub const EXHAUSTIVE_MAX_N: usize = 12;

/// A join-closed family of subsets, stored in a linear extension of its order.
#[derive(Clone, Debug)]
pub struct FocalPointSet<M: SubsetMask = u64> {
    frame: Arc<FrameOfDiscernment>,
    direction: OrderDirection,
    points: Vec<M>,
    generators: Vec<M>,
    index: HashMap<M, usize>,
}

/// Smallest `d`-join-closed superset of `generators`.
///
/// Outer loop over the generators, inner loop over the points found so far;
/// comparable pairs are skipped since their join is one of the two.
/// Generators are visited by increasing rank and those already reached are
/// skipped: after each outer step the points are closed, so a generator in
/// the closure of earlier ones adds nothing.
pub fn closure<M: SubsetMask>(
    frame: Arc<FrameOfDiscernment>,
    generators: &[M],
    d: OrderDirection,
) -> Result<FocalPointSet<M>> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    frame.check_width::<M>()?;
    let n = frame.len();
    let mut gens: Vec<M> = generators.to_vec();
    gens.sort_unstable_by(|a, b| a.canonical_cmp(b));
    gens.dedup();
    let mut order = gens.clone();
    order.sort_by_key(|&g| d.rank(g, n));

    let mut seen: HashSet<M> = HashSet::with_capacity(gens.len());
    let mut points: Vec<M> = Vec::with_capacity(gens.len());
    for s in order {
        if !seen.insert(s) {
            continue;
        }
        points.push(s);
        let mut i = 0;
        while i < points.len() {
            let p = points[i];
            i += 1;
            if d.comparable(s, p) {
                continue;
            }
            let j = d.join(s, p);
            if seen.insert(j) {
                points.push(j);
            }
        }
    }
    Ok(FocalPointSet::from_closed(frame, d, points, gens))
}

impl<M: SubsetMask> FocalPointSet<M> {
    /// Caller guarantees `points` is join-closed and duplicate-free.
    pub(crate) fn from_closed(
        frame: Arc<FrameOfDiscernment>,
        direction: OrderDirection,
        mut points: Vec<M>,
        generators: Vec<M>,
    ) -> Self {
        let n = frame.len();
        points.sort_unstable_by(|a, b| {
            direction
                .rank(*a, n)
                .cmp(&direction.rank(*b, n))
                .then(a.cmp(b))
        });
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Self {
            frame,
            direction,
            points,
            generators,
            index,
        }
    }

    pub fn frame(&self) -> &Arc<FrameOfDiscernment> {
        &self.frame
    }

    pub fn direction(&self) -> OrderDirection {
        self.direction
    }

    /// Points in a linear extension of the order: everything below a point
    /// comes before it.
    pub fn points(&self) -> &[M] {
        &self.points
    }

    pub fn generators(&self) -> &[M] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, y: M) -> bool {
        self.index.contains_key(&y)
    }

    pub fn position(&self, y: M) -> Option<usize> {
        self.index.get(&y).copied()
    }

    /// Points as a set, for comparisons that ignore the order of storage.
    pub fn point_set(&self) -> HashSet<M> {
        self.points.iter().copied().collect()
    }

    /// Contiguous index ranges of points sharing the same rank. Points of one
    /// layer are pairwise incomparable.
    pub fn layers(&self) -> Vec<Range<usize>> {
        let n = self.frame.len();
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.points.len() {
            if i == self.points.len()
                || self.direction.rank(self.points[i], n)
                    != self.direction.rank(self.points[start], n)
            {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// Join of every point below `y`, if any point is below `y`.
    pub fn cover_below(&self, y: M) -> Option<M> {
        let d = self.direction;
        self.points
            .iter()
            .filter(|&&p| d.leq(p, y))
            .fold(None, |acc, &p| Some(acc.map_or(p, |a| d.join(a, p))))
    }

    /// Points above or equal to `x`; join-closed whenever `self` is.
    pub fn up_set(&self, x: M) -> Self {
        let d = self.direction;
        let pts = self.points.iter().copied().filter(|&p| d.leq(x, p)).collect();
        Self::from_closed(self.frame.clone(), d, pts, vec![x])
    }

    /// Points below or equal to `x`; join-closed whenever `self` is.
    pub fn down_set(&self, x: M) -> Self {
        let d = self.direction;
        let pts = self.points.iter().copied().filter(|&p| d.leq(p, x)).collect();
        Self::from_closed(self.frame.clone(), d, pts, vec![x])
    }

    /// Checks pairwise closure; quadratic, meant for tests and diagnostics.
    pub fn is_join_closed(&self) -> bool {
        let d = self.direction;
        self.points.iter().all(|&p| {
            self.points
                .iter()
                .all(|&r| self.contains(d.join(p, r)))
        })
    }
}

/// Verifies the closure-operator axioms on `s ⊆ s'`: extensivity,
/// monotonicity and idempotence.
pub fn closure_properties_check<M: SubsetMask>(
    frame: &Arc<FrameOfDiscernment>,
    s: &[M],
    s_prime: &[M],
    d: OrderDirection,
) -> bool {
    let (Ok(cs), Ok(csp)) = (closure(frame.clone(), s, d), closure(frame.clone(), s_prime, d)) else {
        return false;
    };
    let extensive = s.iter().all(|&x| cs.contains(x));
    let subset = s.iter().all(|x| s_prime.contains(x));
    let monotone = !subset || cs.points().iter().all(|&x| csp.contains(x));
    let idempotent = closure(frame.clone(), cs.points(), d)
        .map(|c| c.point_set() == cs.point_set())
        .unwrap_or(false);
    extensive && monotone && idempotent
}

/// Values of a (zeta-transformed) function on every point of a focal point set.
#[derive(Clone, Debug)]
pub struct FocalFunction<M: SubsetMask = u64> {
    points: Arc<FocalPointSet<M>>,
    role: Role,
    values: Vec<f64>,
}

impl<M: SubsetMask> FocalFunction<M> {
    /// `values[i]` is the image of `points.points()[i]`.
    pub fn from_values(points: Arc<FocalPointSet<M>>, role: Role, values: Vec<f64>) -> Self {
        assert_eq!(points.len(), values.len(), "one value per focal point");
        Self {
            points,
            role,
            values,
        }
    }

    pub fn from_map(
        points: Arc<FocalPointSet<M>>,
        role: Role,
        images: &HashMap<M, f64>,
    ) -> Result<Self> {
        let values = points
            .points()
            .iter()
            .map(|p| {
                images
                    .get(p)
                    .copied()
                    .ok_or_else(|| Error::IncompleteInput(points.frame().display(*p)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_values(points, role, values))
    }

    pub fn focal_points(&self) -> &Arc<FocalPointSet<M>> {
        &self.points
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (M, f64)> + '_ {
        self.points.points().iter().copied().zip(self.values.iter().copied())
    }

    pub fn at_point(&self, y: M) -> Option<f64> {
        self.points.position(y).map(|i| self.values[i])
    }

    /// Image of any subset, focal point or not.
    pub fn get(&self, y: M) -> f64 {
        extend_zeta(self, y)
    }
}

/// Zeta transform of `f` evaluated on each focal point by summing (or
/// multiplying) over the support only.
pub fn zeta_on_points<M: SubsetMask>(
    f: &SetFunction<M>,
    points: Arc<FocalPointSet<M>>,
) -> FocalFunction<M> {
    let d = points.direction();
    let role = f.role();
    let support = f.entries();
    let values = par::map(points.points(), |&y| {
        support
            .iter()
            .filter(|&&(x, _)| d.leq(x, y))
            .fold(role.neutral(), |acc, &(_, v)| role.combine(acc, v))
    });
    FocalFunction::from_values(points, role, values)
}

/// Image of `y` from the images on the focal points: the value at the
/// largest focal point below `y`, or the neutral when none is below.
pub fn extend_zeta<M: SubsetMask>(g: &FocalFunction<M>, y: M) -> f64 {
    let fp = g.focal_points();
    if let Some(i) = fp.position(y) {
        return g.values[i];
    }
    match fp.cover_below(y) {
        Some(s) => g
            .at_point(s)
            .expect("join of focal points is a focal point"),
        None => g.role.neutral(),
    }
}

/// `η(s, y)` for every focal point `s ≤ y`.
#[derive(Clone, Debug)]
pub struct EtaTable<M: SubsetMask = u64> {
    target: M,
    values: Vec<(M, i64)>,
}

impl<M: SubsetMask> EtaTable<M> {
    pub fn target(&self) -> M {
        self.target
    }

    pub fn get(&self, s: M) -> Option<i64> {
        self.values.iter().find(|e| e.0 == s).map(|e| e.1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (M, i64)> + '_ {
        self.values.iter().copied()
    }
}

/// Downward recursion `η(y,y) = 1`, `η(s,y) = −Σ_{s<p≤y} η(p,y)` over focal points.
pub fn eta_table<M: SubsetMask>(fp: &FocalPointSet<M>, y: M) -> Result<EtaTable<M>> {
    let d = fp.direction();
    let top = fp.position(y).ok_or(Error::NotInSet)?;
    let below: Vec<M> = fp.points()[..=top]
        .iter()
        .copied()
        .filter(|&s| d.leq(s, y))
        .collect();
    let mut values: Vec<(M, i64)> = Vec::with_capacity(below.len());
    for &s in below.iter().rev() {
        let eta = if s == y {
            1
        } else {
            -values
                .iter()
                .filter(|&&(p, _)| d.lt(s, p))
                .map(|&(_, e)| e)
                .sum::<i64>()
        };
        values.push((s, eta));
    }
    values.reverse();
    Ok(EtaTable { target: y, values })
}

/// How [`efficient_mobius`] evaluates the inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InversionPath {
    /// `f(y) = g(y) − Σ_{x<y} f(x)` over focal points, in order.
    #[default]
    Recursive,
    /// `f(y) = Σ_{s≤y} g(s)·η(s,y)` with explicit η tables.
    Eta,
}

/// Möbius transform of `g` given its images on a focal point set containing
/// the support of the result. Off the focal points the result is zero.
pub fn efficient_mobius<M: SubsetMask>(
    g: &FocalFunction<M>,
    path: InversionPath,
) -> Result<SetFunction<M>> {
    invert(g, Role::Additive, path)
}

/// Multiplicative counterpart: `h(y) = g(y) / Π_{x<y} h(x)`; `h = 1` off
/// the focal points.
pub fn efficient_mobius_multiplicative<M: SubsetMask>(
    g: &FocalFunction<M>,
    path: InversionPath,
) -> Result<SetFunction<M>> {
    let fp = g.focal_points();
    if let Some((p, _)) = g.iter().find(|&(_, v)| v.abs() <= SUPPORT_EPS) {
        return Err(Error::ZeroImage(fp.frame().display(p)));
    }
    invert(g, Role::Multiplicative, path)
}

fn invert<M: SubsetMask>(
    g: &FocalFunction<M>,
    role: Role,
    path: InversionPath,
) -> Result<SetFunction<M>> {
    let fp = g.focal_points();
    let d = fp.direction();
    let points = fp.points();
    let entries: Vec<(M, f64)> = match path {
        InversionPath::Recursive => {
            // Only nonneutral results feed later points, so the inner loop
            // runs over the support found so far rather than all focal points.
            let mut found: Vec<(M, f64)> = Vec::new();
            let mut all = Vec::with_capacity(points.len());
            for layer in fp.layers() {
                let layer_points = &points[layer.clone()];
                let layer_values = &g.values[layer];
                let out = par::map_range(layer_points.len(), |k| {
                    let y = layer_points[k];
                    let below = found
                        .iter()
                        .filter(|&&(x, _)| d.lt(x, y))
                        .fold(role.neutral(), |acc, &(_, v)| role.combine(acc, v));
                    match role {
                        Role::Additive => layer_values[k] - below,
                        Role::Multiplicative => layer_values[k] / below,
                    }
                });
                for (&y, v) in layer_points.iter().zip(out) {
                    if !role.is_neutral(v) {
                        found.push((y, v));
                    }
                    all.push((y, v));
                }
            }
            all
        }
        InversionPath::Eta => {
            let values = par::map(points, |&y| -> Result<f64> {
                let eta = eta_table(fp, y)?;
                Ok(eta.iter().fold(role.neutral(), |acc, (s, e)| {
                    let gs = g.values[fp.position(s).expect("point")];
                    match role {
                        Role::Additive => acc + gs * e as f64,
                        Role::Multiplicative => acc * gs.powi(e as i32),
                    }
                }))
            });
            points
                .iter()
                .copied()
                .zip(values)
                .map(|(y, v)| v.map(|v| (y, v)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(SetFunction::from_unique(fp.frame().clone(), role, entries))
}

/// One part of an image partition: every subset lying between one of
/// `min_elements` and one of `max_elements` takes `image`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPart<M: SubsetMask = u64> {
    pub min_elements: Vec<M>,
    pub max_elements: Vec<M>,
    pub image: f64,
}

impl<M: SubsetMask> PartitionPart<M> {
    pub fn contains(&self, y: M, d: OrderDirection) -> bool {
        self.min_elements.iter().any(|&a| d.leq(a, y))
            && self.max_elements.iter().any(|&b| d.leq(y, b))
    }
}

/// Compact description of a zeta transform by regions of constant image.
#[derive(Clone, Debug)]
pub struct ImagePartition<M: SubsetMask = u64> {
    pub frame: Arc<FrameOfDiscernment>,
    pub direction: OrderDirection,
    pub parts: Vec<PartitionPart<M>>,
    pub neutral: f64,
}

impl<M: SubsetMask> ImagePartition<M> {
    /// Exhaustively checks that every subset lies in exactly one part.
    /// Frames above [`EXHAUSTIVE_MAX_N`] are accepted unchecked.
    pub fn validate(&self) -> Result<()> {
        let n = self.frame.len();
        if n > EXHAUSTIVE_MAX_N {
            return Ok(());
        }
        for i in 0..1usize << n {
            let y = M::from_index(i);
            let hits = self
                .parts
                .iter()
                .filter(|p| p.contains(y, self.direction))
                .count();
            if hits != 1 {
                return Err(Error::InvalidPartition(format!(
                    "{} lies in {hits} parts",
                    self.frame.display(y)
                )));
            }
        }
        Ok(())
    }

    /// Image partition of a fully tabulated function: level sets of equal
    /// image (to 1e-9), refined until every part is convex.
    pub fn from_full_image(g: &SetFunction<M>, d: OrderDirection) -> Result<Self> {
        let n = g.frame().len();
        if n > EXHAUSTIVE_MAX_N {
            return Err(Error::FrameTooLarge {
                n,
                limit: EXHAUSTIVE_MAX_N,
            });
        }
        let len = 1usize << n;
        let all: Vec<M> = (0..len).map(M::from_index).collect();
        let level: Vec<i64> = all.iter().map(|&y| (g.get(y) * 1e9).round() as i64).collect();

        // Each element's signature is its level plus the set of known part
        // minima below it. New minima are added until all parts are convex.
        let mut anchors: Vec<M> = Vec::new();
        loop {
            let mut groups: HashMap<(i64, Vec<usize>), Vec<usize>> = HashMap::new();
            for (i, &y) in all.iter().enumerate() {
                let below: Vec<usize> = anchors
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| d.leq(a, y))
                    .map(|(k, _)| k)
                    .collect();
                groups.entry((level[i], below)).or_default().push(i);
            }
            let mut keys: Vec<_> = groups.keys().cloned().collect();
            keys.sort();
            let parts: Vec<PartitionPart<M>> = keys
                .iter()
                .map(|k| {
                    let members: Vec<M> = groups[k].iter().map(|&i| all[i]).collect();
                    let min_elements = minimal(&members, d);
                    let max_elements = minimal(&members, d.dual());
                    PartitionPart {
                        image: g.get(members[0]),
                        min_elements,
                        max_elements,
                    }
                })
                .collect();
            let partition = Self {
                frame: g.frame().clone(),
                direction: d,
                parts,
                neutral: g.neutral(),
            };
            if partition.validate().is_ok() {
                return Ok(partition);
            }
            let before = anchors.len();
            for p in &partition.parts {
                for &m in &p.min_elements {
                    if !anchors.contains(&m) {
                        anchors.push(m);
                    }
                }
            }
            if anchors.len() == before {
                // Every element its own anchor: singletons, always convex.
                anchors = all.clone();
            }
        }
    }

    fn min_union(&self) -> Vec<M> {
        let mut g: Vec<M> = self
            .parts
            .iter()
            .flat_map(|p| p.min_elements.iter().copied())
            .collect();
        g.sort_unstable_by(|a, b| a.canonical_cmp(b));
        g.dedup();
        g
    }

    /// `M`: the minimum of the powerset when its image is the neutral.
    fn neutral_minimum(&self) -> Vec<M> {
        let bottom = self.direction.bottom(self.frame.omega::<M>());
        self.parts
            .iter()
            .filter(|p| p.min_elements.contains(&bottom))
            .filter(|p| (p.image - self.neutral).abs() <= SUPPORT_EPS)
            .map(|_| bottom)
            .collect()
    }
}

fn minimal<M: SubsetMask>(members: &[M], d: OrderDirection) -> Vec<M> {
    members
        .iter()
        .copied()
        .filter(|&x| !members.iter().any(|&z| d.lt(z, x)))
        .collect()
}

/// Focal points recovered from an image partition alone: the closure of
/// the part minima (minus a neutral minimum of the powerset) and their joins
/// with that minimum. Contains the join-closure of the hidden support.
pub fn focal_points_from_partition<M: SubsetMask>(
    gp: &ImagePartition<M>,
) -> Result<FocalPointSet<M>> {
    gp.validate()?;
    let d = gp.direction;
    let neutral_min = gp.neutral_minimum();
    let g_minus_m: Vec<M> = gp
        .min_union()
        .into_iter()
        .filter(|x| !neutral_min.contains(x))
        .collect();
    let mut generators = g_minus_m.clone();
    for &x in &g_minus_m {
        for &a in &neutral_min {
            generators.push(d.join(x, a));
        }
    }
    closure(gp.frame.clone(), &generators, d)
}

/// For nonnegative `f`, the part minima (minus a neutral minimum of the
/// powerset) already contain every focal point; no closure is needed.
pub fn focal_points_from_partition_nonneg<M: SubsetMask>(gp: &ImagePartition<M>) -> Vec<M> {
    let neutral_min = gp.neutral_minimum();
    gp.min_union()
        .into_iter()
        .filter(|x| !neutral_min.contains(x))
        .collect()
}

/// Exhaustive level partition of `2^Ω` by lower closure in `s`.
#[derive(Clone, Debug)]
pub struct LevelPartition<M: SubsetMask = u64> {
    /// Part id of every subset, indexed by mask value.
    pub part_of: Vec<usize>,
    /// Lower closure `{x ∈ S : x ≤ y}` shared by the members of each part.
    pub closures: Vec<Vec<M>>,
    direction: OrderDirection,
}

impl<M: SubsetMask> LevelPartition<M> {
    pub fn num_parts(&self) -> usize {
        self.closures.len()
    }

    pub fn members(&self, part: usize) -> Vec<M> {
        self.part_of
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p == part)
            .map(|(i, _)| M::from_index(i))
            .collect()
    }

    /// Minimum of every part whose lower closure is nonempty (`None` when
    /// such a part has no minimum).
    pub fn minima(&self) -> Vec<Option<M>> {
        let d = self.direction;
        (0..self.num_parts())
            .filter(|&p| !self.closures[p].is_empty())
            .map(|p| {
                let members = self.members(p);
                members
                    .iter()
                    .copied()
                    .find(|&x| members.iter().all(|&z| d.leq(x, z)))
            })
            .collect()
    }
}

pub fn level_partition_oracle<M: SubsetMask>(
    frame: &FrameOfDiscernment,
    s: &[M],
    d: OrderDirection,
) -> Result<LevelPartition<M>> {
    let n = frame.len();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::FrameTooLarge {
            n,
            limit: EXHAUSTIVE_MAX_N,
        });
    }
    let mut ids: HashMap<Vec<M>, usize> = HashMap::new();
    let mut closures = Vec::new();
    let mut part_of = Vec::with_capacity(1 << n);
    for i in 0..1usize << n {
        let y = M::from_index(i);
        let mut below: Vec<M> = s.iter().copied().filter(|&x| d.leq(x, y)).collect();
        below.sort_unstable();
        below.dedup();
        let next = ids.len();
        let id = *ids.entry(below.clone()).or_insert_with(|| {
            closures.push(below);
            next
        });
        part_of.push(id);
    }
    Ok(LevelPartition {
        part_of,
        closures,
        direction: d,
    })
}

/// Full-powerset Möbius transform restricted to the focal points, for
/// cross-checking against [`efficient_mobius`].
pub fn mobius_naive_on_points<M: SubsetMask>(
    g_full: &SetFunction<M>,
    fp: &FocalPointSet<M>,
) -> Result<Vec<f64>> {
    let n = g_full.frame().len();
    if n > NAIVE_MAX_N {
        return Err(Error::FrameTooLarge {
            n,
            limit: NAIVE_MAX_N,
        });
    }
    let f = lattice::mobius_naive(g_full, fp.direction())?;
    Ok(fp.points().iter().map(|&p| f.get(p)).collect())
}
