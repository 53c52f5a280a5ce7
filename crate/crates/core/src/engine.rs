//! One entry point per conversion, dispatched to the naive, FMT or focal
//! point engine. Shared by the command line, the benchmarks and the oracle
//! tests.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dst::{
    commonality_to_conjunctive_weights, implicability_to_disjunctive_weights,
    weights_to_commonality, weights_to_implicability, CommonalityFunction, ImplicabilityFunction,
    MassFunction, WeightFunction, WeightKind,
};
use crate::error::{Error, Result};
use crate::focal::{
    closure, efficient_mobius, efficient_mobius_multiplicative, zeta_on_points, FocalFunction,
    InversionPath,
};
use crate::fusion::{dempster_combine_via_commonalities, normalize};
use crate::lattice::{self, dense_len, fmt_set_function, Transform};
use crate::mask::SubsetMask;
use crate::order::OrderDirection;
use crate::set_function::{Role, SetFunction, SUPPORT_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Sums over every subset with the recursive Möbius function.
    Naive,
    /// Fast Möbius Transform on a dense `2^N` array.
    Fmt,
    /// Focal points only.
    Focal,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Naive, Engine::Fmt, Engine::Focal];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Naive => "naive",
            Engine::Fmt => "fmt",
            Engine::Focal => "focal",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine `{s}` (naive, fmt, focal)"))
    }
}

/// Zeta image of a set function, either tabulated on every subset or kept
/// on focal points.
#[derive(Clone, Debug)]
pub enum Image<M: SubsetMask = u64> {
    Full {
        values: SetFunction<M>,
        direction: OrderDirection,
    },
    Focal(FocalFunction<M>),
}

impl<M: SubsetMask> Image<M> {
    pub fn get(&self, y: M) -> f64 {
        match self {
            Image::Full { values, .. } => values.get(y),
            Image::Focal(g) => g.get(y),
        }
    }

    pub fn role(&self) -> Role {
        match self {
            Image::Full { values, .. } => values.role(),
            Image::Focal(g) => g.role(),
        }
    }

    pub fn direction(&self) -> OrderDirection {
        match self {
            Image::Full { direction, .. } => *direction,
            Image::Focal(g) => g.focal_points().direction(),
        }
    }

    /// Number of focal points, or `2^N` for a full table.
    pub fn stored_points(&self) -> usize {
        match self {
            Image::Full { values, .. } => 1usize << values.frame().len(),
            Image::Focal(g) => g.focal_points().len(),
        }
    }

    fn with_role(self, role: Role) -> Self {
        match self {
            Image::Full { values, direction } => {
                // Absent entries carry the old neutral, so every subset is rewritten.
                let all = (0..1usize << values.frame().len()).map(|i| {
                    let y = M::from_index(i);
                    (y, values.get(y))
                });
                Image::Full {
                    values: SetFunction::from_unique(values.frame().clone(), role, all),
                    direction,
                }
            }
            Image::Focal(g) => Image::Focal(FocalFunction::from_values(
                g.focal_points().clone(),
                role,
                g.values().to_vec(),
            )),
        }
    }
}

fn check_dense<M: SubsetMask>(f: &SetFunction<M>, cap: u64) -> Result<()> {
    dense_len(f.frame().len(), cap).map(|_| ())
}

impl Engine {
    /// Zeta transform of `f` in direction `d`.
    pub fn zeta<M: SubsetMask>(self, f: &SetFunction<M>, d: OrderDirection, cap: u64) -> Result<Image<M>> {
        let values = match self {
            Engine::Naive => {
                check_dense(f, cap)?;
                lattice::zeta_naive(f, d)?
            }
            Engine::Fmt => fmt_set_function(f, Transform::Zeta, d, cap)?,
            Engine::Focal => {
                let mut gens = f.support();
                if gens.is_empty() {
                    gens.push(d.bottom(f.omega()));
                }
                let fp = closure(f.frame().clone(), &gens, d)?;
                return Ok(Image::Focal(zeta_on_points(f, Arc::new(fp))));
            }
        };
        Ok(Image::Full {
            values,
            direction: d,
        })
    }

    /// Möbius transform of an image produced by the same engine.
    pub fn mobius<M: SubsetMask>(self, g: &Image<M>, cap: u64) -> Result<SetFunction<M>> {
        match (self, g) {
            (Engine::Focal, Image::Focal(g)) => match g.role() {
                Role::Additive => efficient_mobius(g, InversionPath::Recursive),
                Role::Multiplicative => efficient_mobius_multiplicative(g, InversionPath::Recursive),
            },
            (Engine::Naive, Image::Full { values, direction }) => {
                check_dense(values, cap)?;
                check_nonzero(values)?;
                lattice::mobius_naive(values, *direction)
            }
            (Engine::Fmt, Image::Full { values, direction }) => {
                check_nonzero(values)?;
                fmt_set_function(values, Transform::Mobius, *direction, cap)
            }
            _ => Err(Error::InvalidTarget),
        }
    }

    /// Weights from a commonality (`Conjunctive`, anchored at `Ω`) or an
    /// implicability (`Disjunctive`, anchored at `∅`) image. Returns the
    /// weights as a multiplicative set function (1 off its support).
    pub fn weights<M: SubsetMask>(self, g: &Image<M>, kind: WeightKind, cap: u64) -> Result<SetFunction<M>> {
        if g.direction() != kind.direction() {
            return Err(Error::InvalidTarget);
        }
        match g {
            Image::Focal(f) => {
                let omega = f.focal_points().frame().omega();
                let w = match kind {
                    WeightKind::Conjunctive => commonality_to_conjunctive_weights(
                        &CommonalityFunction::new(f.clone())?,
                        omega,
                    )?,
                    WeightKind::Disjunctive => implicability_to_disjunctive_weights(
                        &ImplicabilityFunction::new(f.clone())?,
                        M::empty(),
                    )?,
                };
                Ok(w.as_set_function())
            }
            Image::Full { values, .. } => {
                if values.len() < 1usize << values.frame().len() {
                    let zero = (0..1usize << values.frame().len())
                        .map(M::from_index)
                        .find(|&y| values.get(y).abs() <= SUPPORT_EPS)
                        .expect("some image is zero");
                    return Err(Error::ZeroCommonality(values.frame().display(zero)));
                }
                let mult = g.clone().with_role(Role::Multiplicative);
                let h = self.mobius(&mult, cap)?;
                Ok(h.map_values(|_, v| 1.0 / v))
            }
        }
    }

    /// Commonality or implicability rebuilt from weights.
    pub fn weights_to_zeta<M: SubsetMask>(
        self,
        w: &SetFunction<M>,
        kind: WeightKind,
        cap: u64,
    ) -> Result<Image<M>> {
        if let Some(&(k, v)) = w.entries().iter().find(|e| !(e.1 > 0.0 && e.1.is_finite())) {
            let _ = k;
            return Err(Error::ZeroWeight(v));
        }
        match self {
            Engine::Focal => {
                let anchor = match kind {
                    WeightKind::Conjunctive => w.omega(),
                    WeightKind::Disjunctive => M::empty(),
                };
                let wf = WeightFunction::new(w.frame().clone(), kind, anchor, w.iter())?;
                let g = match kind {
                    WeightKind::Conjunctive => weights_to_commonality(&wf)?.focal().clone(),
                    WeightKind::Disjunctive => weights_to_implicability(&wf)?.focal().clone(),
                };
                Ok(Image::Focal(g))
            }
            _ => {
                let h = w.map_values(|_, v| 1.0 / v);
                let g = self.zeta(&h, kind.direction(), cap)?;
                Ok(g.with_role(Role::Additive))
            }
        }
    }

    /// Dempster's rule via a product of commonalities.
    pub fn dempster<M: SubsetMask>(
        self,
        m1: &MassFunction<M>,
        m2: &MassFunction<M>,
        cap: u64,
    ) -> Result<MassFunction<M>> {
        if self == Engine::Focal {
            return dempster_combine_via_commonalities(m1, m2);
        }
        m1.as_set_function().same_frame(m2.as_set_function())?;
        let d = OrderDirection::Superset;
        let q1 = self.zeta(m1.as_set_function(), d, cap)?;
        let q2 = self.zeta(m2.as_set_function(), d, cap)?;
        let (Image::Full { values: a, .. }, Image::Full { values: b, .. }) = (&q1, &q2) else {
            unreachable!("dense engines return full images")
        };
        let product = SetFunction::from_unique(
            a.frame().clone(),
            Role::Additive,
            a.iter().map(|(y, v)| (y, v * b.get(y))),
        );
        let m = self.mobius(
            &Image::Full {
                values: product,
                direction: d,
            },
            cap,
        )?;
        normalize(&MassFunction::from_set_function(m)?)
    }
}

/// Multiplicative images must be nonzero everywhere.
fn check_nonzero<M: SubsetMask>(g: &SetFunction<M>) -> Result<()> {
    if g.role() == Role::Multiplicative {
        if let Some(&(k, _)) = g.entries().iter().find(|e| e.1.abs() <= SUPPORT_EPS) {
            return Err(Error::ZeroImage(g.frame().display(k)));
        }
    }
    Ok(())
}

/// Targets of [`transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    Commonality,
    Implicability,
    ConjunctiveWeights,
    DisjunctiveWeights,
    Belief,
    Plausibility,
    MassFromCommonality,
    MassFromImplicability,
    MassFromConjunctiveWeights,
    MassFromDisjunctiveWeights,
}

impl Representation {
    pub const ALL: [Representation; 10] = [
        Representation::Commonality,
        Representation::Implicability,
        Representation::ConjunctiveWeights,
        Representation::DisjunctiveWeights,
        Representation::Belief,
        Representation::Plausibility,
        Representation::MassFromCommonality,
        Representation::MassFromImplicability,
        Representation::MassFromConjunctiveWeights,
        Representation::MassFromDisjunctiveWeights,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Representation::Commonality => "q",
            Representation::Implicability => "b",
            Representation::ConjunctiveWeights => "w",
            Representation::DisjunctiveWeights => "v",
            Representation::Belief => "bel",
            Representation::Plausibility => "pl",
            Representation::MassFromCommonality => "mass-from-q",
            Representation::MassFromImplicability => "mass-from-b",
            Representation::MassFromConjunctiveWeights => "mass-from-w",
            Representation::MassFromDisjunctiveWeights => "mass-from-v",
        }
    }

    /// Order in which the representation is a zeta transform.
    pub fn direction(self) -> OrderDirection {
        match self {
            Representation::Commonality
            | Representation::ConjunctiveWeights
            | Representation::MassFromCommonality
            | Representation::MassFromConjunctiveWeights => OrderDirection::Superset,
            _ => OrderDirection::Subset,
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Representation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Representation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Representation::ALL.iter().map(|r| r.name()).collect();
                format!("unknown representation `{s}` ({})", names.join(", "))
            })
    }
}

/// Values of a representation listed on the focal points of the mass.
#[derive(Clone, Debug)]
pub struct Listing<M: SubsetMask = u64> {
    pub representation: Representation,
    pub entries: Vec<(M, f64)>,
    /// Points the engine actually stored (`2^N` for dense engines).
    pub stored_points: usize,
}

/// Converts `m` to `to` with `engine` and lists the result on the closure
/// of `supp(m)` in the representation's order (plus `Ω` or `∅` for weights).
/// Plausibilities are listed on the complements of those points.
pub fn transform<M: SubsetMask>(
    m: &MassFunction<M>,
    to: Representation,
    engine: Engine,
    cap: u64,
) -> Result<Listing<M>> {
    use Representation::*;
    let d = to.direction();
    let f = m.as_set_function();
    let frame = m.frame();
    let mut gens = m.support();
    match to {
        ConjunctiveWeights | MassFromConjunctiveWeights => gens.push(frame.omega()),
        DisjunctiveWeights | MassFromDisjunctiveWeights => gens.push(M::empty()),
        _ => {}
    }
    let points = closure(frame.clone(), &gens, d)?;
    let g = engine.zeta(f, d, cap)?;
    let stored = g.stored_points();
    let kind = match d {
        OrderDirection::Superset => WeightKind::Conjunctive,
        OrderDirection::Subset => WeightKind::Disjunctive,
    };
    let list = |h: &dyn Fn(M) -> f64| -> Vec<(M, f64)> {
        points.points().iter().map(|&p| (p, h(p))).collect()
    };
    let entries = match to {
        Commonality | Implicability => list(&|p| g.get(p)),
        Belief => {
            let empty = m.conflict();
            list(&|p| g.get(p) - empty)
        }
        Plausibility => points
            .points()
            .iter()
            .map(|&p| (frame.complement(p), 1.0 - g.get(p)))
            .collect(),
        ConjunctiveWeights | DisjunctiveWeights => {
            let w = engine.weights(&g, kind, cap)?;
            list(&|p| w.get(p))
        }
        MassFromCommonality | MassFromImplicability => {
            let back = engine.mobius(&g, cap)?;
            list(&|p| back.get(p))
        }
        MassFromConjunctiveWeights | MassFromDisjunctiveWeights => {
            let w = engine.weights(&g, kind, cap)?;
            let g2 = engine.weights_to_zeta(&w, kind, cap)?;
            let back = engine.mobius(&g2, cap)?;
            list(&|p| back.get(p))
        }
    };
    Ok(Listing {
        representation: to,
        entries,
        stored_points: stored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{frame3, running_mass, A, B, C, OMEGA};
    use crate::DEFAULT_MEM_CAP_BYTES as CAP;

    fn mass() -> MassFunction {
        MassFunction::from_set_function(running_mass()).unwrap()
    }

    #[test]
    fn engines_agree_on_running_example() {
        let m = mass();
        for to in Representation::ALL {
            let lists: Vec<_> = Engine::ALL
                .iter()
                .map(|&e| transform(&m, to, e, CAP))
                .collect();
            match to {
                Representation::DisjunctiveWeights | Representation::MassFromDisjunctiveWeights => {
                    // m(∅) = 0: no disjunctive decomposition.
                    for l in lists {
                        assert!(l.is_err(), "{to}");
                    }
                }
                _ => {
                    let lists: Vec<_> = lists.into_iter().map(Result::unwrap).collect();
                    for l in &lists[1..] {
                        for (a, b) in l.entries.iter().zip(&lists[0].entries) {
                            assert_eq!(a.0, b.0);
                            assert!((a.1 - b.1).abs() < 1e-12, "{to}: {a:?} vs {b:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weights_listing() {
        let l = transform(&mass(), Representation::ConjunctiveWeights, Engine::Focal, CAP).unwrap();
        let w: Vec<f64> = l.entries.iter().map(|e| e.1).collect();
        assert_eq!(l.entries.len(), 6);
        assert!((l.entries.iter().find(|e| e.0 == OMEGA).unwrap().1 - 10.0).abs() < 1e-12);
        assert!(w.iter().all(|v| *v > 0.0));
        let pl = transform(&mass(), Representation::Plausibility, Engine::Focal, CAP).unwrap();
        assert!(pl.entries.iter().any(|e| e.0 == C && (e.1 - 0.3).abs() < 1e-12));
        let _ = (A, B, frame3());
    }

    #[test]
    fn dempster_engines_agree() {
        let m = mass();
        let other = MassFunction::new(frame3(), [(A | B, 0.5), (OMEGA, 0.5)]).unwrap();
        let a = Engine::Focal.dempster(&m, &other, CAP).unwrap();
        for e in [Engine::Naive, Engine::Fmt] {
            assert!(e.dempster(&m, &other, CAP).unwrap().max_abs_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("fmt".parse::<Engine>().unwrap(), Engine::Fmt);
        assert!("slow".parse::<Engine>().is_err());
        for r in Representation::ALL {
            assert_eq!(r.name().parse::<Representation>().unwrap(), r);
        }
    }
}
