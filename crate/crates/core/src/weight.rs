//! Weights, potentials and the inequalities they satisfy.
//!
//! Values are always computable; a `≤` verdict is only produced when the
//! condition that licenses the corresponding theorem has been verified.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{binomial, integer, uint_to_rational, BigRational, ProbabilityVector};
use crate::error::{Error, Result};
use crate::system::{SubspaceSystem, System, TupleSystem};
use crate::verify::{self, Condition, ConditionKind, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalKind {
    /// `Σ 1/C(a+b, a)`.
    Bollobas,
    /// `Σ 1/((1+a+b) C(a+b, a))`.
    Yue,
    /// `Σ ∏_k 1/((1+a_k+b_k) C(a_k+b_k, a_k))` over the blocks of a context.
    PartitionedYue,
    /// `Σ ∏_k 1/C(a_k+b_k, a_k)`, bounded by `∏ (1+n_k)`.
    Y26Product,
    /// `Σ ∏_ℓ p_ℓ^{|A^(ℓ)|}`.
    Tuza(ProbabilityVector),
    /// The Bollobás sum under the monotone precondition.
    ScottWilmer,
    /// `Σ 1/C(a+b, b)`, bounded by `n + 1`.
    HegedusFrankl,
}

impl FunctionalKind {
    pub const NAMES: [&'static str; 7] = [
        "bollobas",
        "yue",
        "partitioned-yue",
        "y26",
        "tuza",
        "scott-wilmer",
        "hegedus-frankl",
    ];

    /// Looks a functional up by name; `tuza` needs `p`.
    pub fn from_name(name: &str, p: Option<ProbabilityVector>) -> Result<Self> {
        Ok(match name {
            "bollobas" => Self::Bollobas,
            "yue" => Self::Yue,
            "partitioned-yue" => Self::PartitionedYue,
            "y26" => Self::Y26Product,
            "scott-wilmer" => Self::ScottWilmer,
            "hegedus-frankl" => Self::HegedusFrankl,
            "tuza" => Self::Tuza(p.ok_or_else(|| {
                Error::InvalidProbability("tuza requires a probability vector".into())
            })?),
            _ => return Err(Error::Parse(format!("unknown functional {name:?}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Bollobas => "bollobas",
            Self::Yue => "yue",
            Self::PartitionedYue => "partitioned-yue",
            Self::Y26Product => "y26",
            Self::Tuza(_) => "tuza",
            Self::ScottWilmer => "scott-wilmer",
            Self::HegedusFrankl => "hegedus-frankl",
        }
    }

    fn is_pair_only(&self) -> bool {
        !matches!(self, Self::Tuza(_))
    }

    fn is_partitioned(&self) -> bool {
        matches!(self, Self::PartitionedYue | Self::Y26Product)
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tuza(p) => write!(f, "tuza({p})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for FunctionalKind {
    type Err = Error;

    /// `name` or `tuza:p1,p2,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("tuza", p)) => Ok(Self::Tuza(p.parse()?)),
            Some(_) => Err(Error::Parse(format!("unknown functional {s:?}"))),
            None => Self::from_name(s, None),
        }
    }
}

fn inverse_binomial(a: usize, b: usize) -> BigRational {
    uint_to_rational(&binomial((a + b) as u64, a as i64)).recip()
}

/// `1/((1+a+b) C(a+b, a))`.
pub fn yue_term(a: usize, b: usize) -> BigRational {
    inverse_binomial(a, b) / integer(1 + a + b)
}

/// Contribution of tuple `i` to `ω` under `kind`. Shapes are assumed checked.
pub(crate) fn term(sys: &dyn TupleSystem, kind: &FunctionalKind, i: usize) -> Result<BigRational> {
    Ok(match kind {
        FunctionalKind::Bollobas | FunctionalKind::ScottWilmer => {
            let s = sys.sizes(i);
            inverse_binomial(s[0], s[1])
        }
        FunctionalKind::HegedusFrankl => {
            let s = sys.sizes(i);
            inverse_binomial(s[1], s[0])
        }
        FunctionalKind::Yue => {
            let s = sys.sizes(i);
            yue_term(s[0], s[1])
        }
        FunctionalKind::PartitionedYue => sys
            .profile(i)?
            .0
            .iter()
            .map(|ab| yue_term(ab[0], ab[1]))
            .product(),
        FunctionalKind::Y26Product => sys
            .profile(i)?
            .0
            .iter()
            .map(|ab| inverse_binomial(ab[0], ab[1]))
            .product(),
        FunctionalKind::Tuza(p) => p.monomial(&sys.sizes(i)),
    })
}

pub(crate) fn check_shape(sys: &dyn TupleSystem, kind: &FunctionalKind) -> Result<()> {
    if kind.is_pair_only() && sys.arity() != 2 {
        return Err(Error::Shape(format!("{} is defined for pair systems", kind.name())));
    }
    if kind.is_partitioned() && sys.context_sizes().is_none() {
        return Err(Error::MissingContext);
    }
    if let FunctionalKind::Tuza(p) = kind {
        if p.len() != sys.arity() {
            return Err(Error::ArityMismatch {
                expected: sys.arity(),
                found: p.len(),
            });
        }
    }
    if *kind == FunctionalKind::ScottWilmer {
        for i in 1..sys.len() {
            let (prev, cur) = (sys.sizes(i - 1), sys.sizes(i));
            if prev[0] > cur[0] || prev[1] < cur[1] {
                return Err(Error::NotLicensed(format!(
                    "sizes of tuples {i} and {} break a_1 <= ... <= a_m, b_1 >= ... >= b_m",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

pub fn omega_tuples(sys: &dyn TupleSystem, kind: &FunctionalKind) -> Result<BigRational> {
    check_shape(sys, kind)?;
    let mut total = BigRational::zero();
    for i in 0..sys.len() {
        total += term(sys, kind, i)?;
    }
    Ok(total)
}

/// The exact weight of a system; zero for the empty system.
pub fn omega(system: &System, kind: &FunctionalKind) -> Result<BigRational> {
    omega_tuples(system.as_tuples(), kind)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityVerdict {
    pub functional: FunctionalKind,
    pub value: BigRational,
    pub bound: BigRational,
    pub holds: bool,
    pub tight: bool,
    pub licensed_by: ConditionKind,
    pub field_caveat: bool,
}

fn licensed(report: VerificationReport, what: &str) -> Result<ConditionKind> {
    if report.verdict {
        Ok(report.condition)
    } else {
        Err(Error::NotLicensed(format!(
            "{what} requires a {} system (first violation: {:?})",
            report.condition.condition, report.first_violation
        )))
    }
}

fn require_compatible(system: &System) -> Result<()> {
    if let System::Subspace(s) = system {
        if let Some(i) = s.first_incompatible()? {
            return Err(Error::NotCompatible(i + 1));
        }
    }
    Ok(())
}

/// Evaluates `ω ≤ bound` for the theorem that governs `kind`, refusing when
/// its hypothesis does not hold.
pub fn evaluate_inequality(system: &System, kind: &FunctionalKind) -> Result<InequalityVerdict> {
    let value = omega(system, kind)?;
    let skew = ConditionKind::for_system(system, Condition::Skew);
    let one = BigRational::one();
    let (licensed_by, bound) = match kind {
        FunctionalKind::Bollobas => {
            let full = verify::check(system, Condition::Bollobas)?;
            if full.verdict && matches!(system, System::Set(_)) {
                (full.condition, one)
            } else {
                let mono = verify::verify(system, skew.monotone())?;
                (licensed(mono, "the Bollobás sum bound")?, one)
            }
        }
        FunctionalKind::ScottWilmer => (
            licensed(verify::verify(system, skew.monotone())?, "the monotone bound")?,
            one,
        ),
        FunctionalKind::HegedusFrankl => (
            licensed(verify::verify(system, skew)?, "the n+1 bound")?,
            integer(system.ground() + 1),
        ),
        FunctionalKind::Yue => (licensed(verify::verify(system, skew)?, "the Yue bound")?, one),
        FunctionalKind::PartitionedYue => {
            require_compatible(system)?;
            (
                licensed(verify::verify(system, skew)?, "the partitioned Yue bound")?,
                one,
            )
        }
        FunctionalKind::Y26Product => {
            require_compatible(system)?;
            let sizes = system.as_tuples().context_sizes().ok_or(Error::MissingContext)?;
            let bound: BigUint = sizes.iter().map(|&n_k| BigUint::from(n_k + 1)).product();
            (
                licensed(verify::verify(system, skew)?, "the product bound")?,
                uint_to_rational(&bound),
            )
        }
        FunctionalKind::Tuza(_) => {
            let needed = match system {
                System::Set(_) => Condition::Weak,
                System::Subspace(_) => Condition::Skew,
            };
            (
                licensed(verify::check(system, needed)?, "the Tuza bound")?,
                one,
            )
        }
    };
    Ok(InequalityVerdict {
        functional: kind.clone(),
        holds: value <= bound,
        tight: value == bound,
        value,
        bound,
        licensed_by,
        field_caveat: system.is_prime_field(),
    })
}

/// Which potential, and which notion of a full tuple, a saturation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Set d-tuples; full when the parts cover `[n]`.
    Set,
    /// Decomposed subspace pairs; full when each block is covered.
    Pair,
    /// Subspace d-tuples; full when the parts span `V`.
    Tuple,
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set" => Ok(Flavor::Set),
            "pair" => Ok(Flavor::Pair),
            "tuple" => Ok(Flavor::Tuple),
            _ => Err(Error::Parse(format!("unknown flavor {s:?}"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Set => "set",
            Flavor::Pair => "pair",
            Flavor::Tuple => "tuple",
        })
    }
}

pub(crate) fn check_flavor(system: &System, flavor: Flavor) -> Result<()> {
    match (flavor, system) {
        (Flavor::Set, System::Set(_)) => Ok(()),
        (Flavor::Tuple, System::Subspace(_)) => Ok(()),
        (Flavor::Pair, System::Subspace(s)) => {
            if s.d() != 2 {
                return Err(Error::Shape("pair flavor needs a pair system".into()));
            }
            if s.decomposition().is_none() {
                return Err(Error::MissingContext);
            }
            Ok(())
        }
        (flavor, _) => Err(Error::Shape(format!(
            "flavor {flavor} does not apply to this kind of system"
        ))),
    }
}

/// `dim((A_i ∩ V_k) + (B_i ∩ V_k))` for each block `k` of a decomposed pair
/// system.
pub fn covered_dims(system: &SubspaceSystem, i: usize) -> Result<Vec<usize>> {
    system.check_index(i)?;
    let dec = system.decomposition().ok_or(Error::MissingContext)?;
    let t = &system.tuples()[i];
    dec.blocks()
        .iter()
        .map(|block| {
            let a = t.parts()[0].component(block)?;
            let b = t.parts()[1].component(block)?;
            Ok(a.sum(&b)?.dim())
        })
        .collect()
}

/// `d_{i,k} = n_k − dim((A_i ∩ V_k) ⊕ (B_i ∩ V_k))`.
pub fn block_deficits(system: &SubspaceSystem, i: usize) -> Result<Vec<usize>> {
    let dims = system.decomposition().ok_or(Error::MissingContext)?.block_dims();
    Ok(covered_dims(system, i)?
        .into_iter()
        .zip(dims)
        .map(|(c, n_k)| n_k - c)
        .collect())
}

/// `∏_k 2^{n_k − d_{i,k}}`, the contribution of pair `i` to the pair potential.
pub fn pair_potential_term(system: &SubspaceSystem, i: usize) -> Result<BigUint> {
    let exponent: usize = covered_dims(system, i)?.iter().sum();
    Ok(BigUint::one() << exponent)
}

/// The potential: total size for sets and subspace tuples, `Σ_i ∏_k 2^{n_k−d_{i,k}}`
/// for decomposed pairs.
pub fn phi(system: &System, flavor: Flavor) -> Result<BigUint> {
    check_flavor(system, flavor)?;
    let sys = system.as_tuples();
    match (flavor, system) {
        (Flavor::Pair, System::Subspace(s)) => {
            let mut total = BigUint::zero();
            for i in 0..s.tuples().len() {
                total += pair_potential_term(s, i)?;
            }
            Ok(total)
        }
        _ => Ok(BigUint::from(
            (0..sys.len()).map(|i| sys.sizes(i).iter().sum::<usize>()).sum::<usize>(),
        )),
    }
}

/// Termination bound on the potential: `4^n`, `n (d+1)^n` or `n d^n`.
pub fn phi_upper_bound(system: &System, flavor: Flavor) -> Result<BigUint> {
    check_flavor(system, flavor)?;
    let n = system.ground();
    let d = system.arity();
    Ok(match flavor {
        Flavor::Pair => BigUint::one() << (2 * n),
        Flavor::Set => BigUint::from(n) * BigUint::from(d + 1).pow(n as u32),
        Flavor::Tuple => BigUint::from(n) * BigUint::from(d).pow(n as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rational, Field};
    use crate::subspace::{Decomposition, Subspace};
    use crate::system::{Partition, SetSystem, SetTuple, SubspaceTuple};

    fn chain2() -> SetSystem {
        SetSystem::pairs(
            2,
            &[
                (vec![1, 2], vec![]),
                (vec![1], vec![2]),
                (vec![2], vec![1]),
                (vec![], vec![1, 2]),
            ],
        )
        .unwrap()
    }

    /// `Σ_S 1/((n+1) C(n, |S|))` over all subsets: one per size class.
    fn chain_yue_closed_form(n: u64) -> BigRational {
        (0..=n)
            .map(|k| {
                uint_to_rational(&binomial(n, k as i64))
                    / (integer(n + 1) * uint_to_rational(&binomial(n, k as i64)))
            })
            .sum()
    }

    #[test]
    fn yue_examples() {
        let empty = System::Set(SetSystem::pairs(0, &[(vec![], vec![])]).unwrap());
        assert_eq!(omega(&empty, &FunctionalKind::Yue).unwrap(), integer(1));
        let chain = System::Set(chain2());
        assert_eq!(chain_yue_closed_form(2), integer(1));
        assert_eq!(omega(&chain, &FunctionalKind::Yue).unwrap(), chain_yue_closed_form(2));
        let v = evaluate_inequality(&chain, &FunctionalKind::Yue).unwrap();
        assert!(v.holds && v.tight);
    }

    #[test]
    fn partitioned_yue_example() {
        let s = System::Set(
            chain2()
                .with_partition(Some(Partition::new(2, &[vec![1], vec![2]]).unwrap()))
                .unwrap(),
        );
        // Each pair contributes ∏_k 1/(C(1, a_k)·2) = 1/4.
        assert_eq!(omega(&s, &FunctionalKind::PartitionedYue).unwrap(), integer(1));
        assert!(evaluate_inequality(&s, &FunctionalKind::PartitionedYue).unwrap().tight);
        assert_eq!(
            omega(&System::Set(chain2()), &FunctionalKind::PartitionedYue),
            Err(Error::MissingContext)
        );
    }

    #[test]
    fn hegedus_frankl_example() {
        let chain = System::Set(chain2());
        let v = evaluate_inequality(&chain, &FunctionalKind::HegedusFrankl).unwrap();
        assert_eq!(v.value, integer(3));
        assert_eq!(v.bound, integer(3));
        assert!(v.tight);
    }

    #[test]
    fn tuza_examples() {
        let p: ProbabilityVector = "1/2,1/2".parse().unwrap();
        let s = System::Set(
            SetSystem::new(
                1,
                2,
                vec![SetTuple::from_masks(vec![1, 0]), SetTuple::from_masks(vec![0, 1])],
                None,
            )
            .unwrap(),
        );
        let v = evaluate_inequality(&s, &FunctionalKind::Tuza(p)).unwrap();
        assert_eq!(v.value, integer(1));
        assert!(v.tight);
        let p3: ProbabilityVector = "1/3,1/3,1/3".parse().unwrap();
        assert!(matches!(
            omega(&s, &FunctionalKind::Tuza(p3)),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn bollobas_uniform_construction() {
        let s = System::Set(SetSystem::pairs(2, &[(vec![1], vec![2]), (vec![2], vec![1])]).unwrap());
        let v = evaluate_inequality(&s, &FunctionalKind::Bollobas).unwrap();
        assert_eq!(v.value, integer(1));
        assert_eq!(v.licensed_by.condition, Condition::Bollobas);
        assert_eq!(
            omega(&s, &FunctionalKind::HegedusFrankl).unwrap(),
            omega(&s, &FunctionalKind::Bollobas).unwrap()
        );
    }

    #[test]
    fn bollobas_sum_refused_for_plain_skew() {
        // Skew but neither Bollobás nor monotone: the Bollobás sum exceeds 1.
        let chain = System::Set(chain2());
        assert_eq!(omega(&chain, &FunctionalKind::Bollobas).unwrap(), integer(3));
        assert!(matches!(
            evaluate_inequality(&chain, &FunctionalKind::Bollobas),
            Err(Error::NotLicensed(_))
        ));
        assert!(matches!(
            omega(&chain, &FunctionalKind::ScottWilmer),
            Err(Error::NotLicensed(_))
        ));
        let reversed = chain.reversed();
        // Reversed chain is monotone but not skew.
        assert_eq!(omega(&reversed, &FunctionalKind::ScottWilmer).unwrap(), integer(3));
        assert!(evaluate_inequality(&reversed, &FunctionalKind::ScottWilmer).is_err());
    }

    #[test]
    fn scott_wilmer_monotone() {
        let s = System::Set(SetSystem::pairs(3, &[(vec![1], vec![2, 3]), (vec![2], vec![1])]).unwrap());
        let v = evaluate_inequality(&s, &FunctionalKind::ScottWilmer).unwrap();
        assert_eq!(v.value, rational(5, 6));
        assert!(v.licensed_by.monotone);
        assert!(v.holds && !v.tight);
    }

    #[test]
    fn y26_bound() {
        let s = System::Set(
            chain2()
                .with_partition(Some(Partition::new(2, &[vec![1], vec![2]]).unwrap()))
                .unwrap(),
        );
        let v = evaluate_inequality(&s, &FunctionalKind::Y26Product).unwrap();
        assert_eq!(v.value, integer(4));
        assert_eq!(v.bound, integer(4));
        let one_block = System::Set(
            chain2()
                .with_partition(Some(Partition::new(2, &[vec![1, 2]]).unwrap()))
                .unwrap(),
        );
        assert_eq!(
            omega(&one_block, &FunctionalKind::Y26Product).unwrap(),
            omega(&one_block, &FunctionalKind::Bollobas).unwrap()
        );
        assert_eq!(
            omega(&one_block, &FunctionalKind::PartitionedYue).unwrap(),
            omega(&one_block, &FunctionalKind::Yue).unwrap()
        );
    }

    #[test]
    fn potentials() {
        let s = System::Set(SetSystem::pairs(2, &[(vec![1], vec![])]).unwrap());
        assert_eq!(phi(&s, Flavor::Set).unwrap(), BigUint::from(1u32));
        assert_eq!(phi_upper_bound(&s, Flavor::Set).unwrap(), BigUint::from(18u32));

        let f = Field::Rational;
        let e1 = Subspace::coordinate(2, f, [0]);
        let pair = SubspaceSystem::new(
            2,
            f,
            2,
            vec![SubspaceTuple::new(vec![e1.clone(), Subspace::zero(2, f)])],
            Some(Decomposition::whole(2, f)),
        )
        .unwrap();
        let pair = System::Subspace(pair);
        assert_eq!(phi(&pair, Flavor::Pair).unwrap(), BigUint::from(2u32));
        let full = SubspaceSystem::new(
            2,
            f,
            2,
            vec![SubspaceTuple::new(vec![e1, Subspace::coordinate(2, f, [1])])],
            Some(Decomposition::whole(2, f)),
        )
        .unwrap();
        assert_eq!(phi(&System::Subspace(full), Flavor::Pair).unwrap(), BigUint::from(4u32));

        let three = System::Subspace(SubspaceSystem::new(3, f, 2, vec![], Some(Decomposition::whole(3, f))).unwrap());
        assert_eq!(phi_upper_bound(&three, Flavor::Pair).unwrap(), BigUint::from(64u32));
        let tuple3 = System::Subspace(SubspaceSystem::new(2, f, 3, vec![], None).unwrap());
        assert_eq!(phi_upper_bound(&tuple3, Flavor::Tuple).unwrap(), BigUint::from(18u32));
        assert!(matches!(phi(&s, Flavor::Pair), Err(Error::Shape(_))));
        assert_eq!(phi(&tuple3, Flavor::Pair), Err(Error::Shape("pair flavor needs a pair system".into())));
    }

    #[test]
    fn functional_names() {
        for name in FunctionalKind::NAMES {
            if name == "tuza" {
                assert!(FunctionalKind::from_name(name, None).is_err());
            } else {
                assert_eq!(FunctionalKind::from_name(name, None).unwrap().name(), name);
            }
        }
        let t: FunctionalKind = "tuza:1/2,1/2".parse().unwrap();
        assert_eq!(t.to_string(), "tuza(1/2,1/2)");
    }
}
