//! Families on which the inequalities hold with equality.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::system::{elements_of, embed, Partition, SetSystem, SetTuple, System, MAX_SET_GROUND};

/// Largest family any generator will produce.
pub const MAX_FAMILY_SIZE: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// All pairs `(S, [a+b] \ S)` with `|S| = a`.
    UniformBollobas { a: usize, b: usize },
    /// All `2^n` pairs `(S, [n] \ S)`, non-increasing `|S|`.
    ComplementChain { n: usize },
    PartitionedComplementChain { n: usize, blocks: Vec<Vec<usize>> },
    /// All `d^n` full d-tuples of pairwise disjoint sets covering `[n]`.
    FullTuzaTuples { n: usize, d: usize },
    /// Coordinate embedding of another family.
    Embedded(Box<FamilyKind>),
}

impl FamilyKind {
    pub const NAMES: [&'static str; 4] = [
        "uniform-bollobas",
        "complement-chain",
        "partitioned-complement-chain",
        "full-tuza-tuples",
    ];

    /// Builds a family from its name and integer parameters; `blocks` is used
    /// only by the partitioned chain.
    pub fn from_parts(name: &str, params: &[usize], blocks: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if params.len() != k {
                return Err(Error::Parse(format!("family {name} takes {k} parameter(s), got {}", params.len())));
            }
            Ok(())
        };
        match name {
            "uniform-bollobas" => {
                want(2)?;
                Ok(Self::UniformBollobas { a: params[0], b: params[1] })
            }
            "complement-chain" => {
                want(1)?;
                Ok(Self::ComplementChain { n: params[0] })
            }
            "partitioned-complement-chain" => {
                want(1)?;
                let blocks = blocks.ok_or_else(|| Error::Parse("partitioned-complement-chain needs blocks".into()))?;
                Ok(Self::PartitionedComplementChain { n: params[0], blocks })
            }
            "full-tuza-tuples" => {
                want(2)?;
                Ok(Self::FullTuzaTuples { n: params[0], d: params[1] })
            }
            other => Err(Error::Parse(format!(
                "unknown family {other:?} (expected one of {})",
                Self::NAMES.join(", ")
            ))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UniformBollobas { a, b } => write!(f, "uniform-bollobas({a},{b})"),
            Self::ComplementChain { n } => write!(f, "complement-chain({n})"),
            Self::PartitionedComplementChain { n, blocks } => {
                let blocks: Vec<String> = blocks
                    .iter()
                    .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "partitioned-complement-chain({n};{})", blocks.join(";"))
            }
            Self::FullTuzaTuples { n, d } => write!(f, "full-tuza-tuples({n},{d})"),
            Self::Embedded(inner) => write!(f, "embedded({inner})"),
        }
    }
}

fn check_size(n: usize, base: u64) -> Result<()> {
    if n > MAX_SET_GROUND {
        return Err(Error::GroundTooLarge(n));
    }
    match base.checked_pow(n as u32) {
        Some(size) if size <= MAX_FAMILY_SIZE => Ok(()),
        _ => Err(Error::EnumerationTooLarge(format!(
            "{base}^{n} tuples exceeds the limit of {MAX_FAMILY_SIZE}"
        ))),
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Masks of `[n]` ordered by non-increasing size, ties by sorted element list.
fn chain_masks(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by(|&x, &y| {
        y.count_ones()
            .cmp(&x.count_ones())
            .then_with(|| elements_of(x).cmp(&elements_of(y)))
    });
    masks
}

fn complement_chain(n: usize) -> Result<SetSystem> {
    check_size(n, 2)?;
    let ground = full_mask(n);
    let tuples = chain_masks(n)
        .into_iter()
        .map(|s| SetTuple::from_masks(vec![s, ground & !s]))
        .collect();
    SetSystem::new(n, 2, tuples, None)
}

pub fn construct(kind: &FamilyKind) -> Result<System> {
    match kind {
        FamilyKind::UniformBollobas { a, b } => {
            let n = a + b;
            check_size(n, 2)?;
            let ground = full_mask(n);
            let mut masks: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() as usize == *a).collect();
            masks.sort_by_key(|&m| elements_of(m));
            let tuples = masks
                .into_iter()
                .map(|s| SetTuple::from_masks(vec![s, ground & !s]))
                .collect();
            Ok(System::Set(SetSystem::new(n, 2, tuples, None)?))
        }
        FamilyKind::ComplementChain { n } => Ok(System::Set(complement_chain(*n)?)),
        FamilyKind::PartitionedComplementChain { n, blocks } => {
            let partition = Partition::new(*n, blocks)?;
            Ok(System::Set(complement_chain(*n)?.with_partition(Some(partition))?))
        }
        FamilyKind::FullTuzaTuples { n, d } => {
            if *d == 0 {
                return Err(Error::Shape("arity must be positive".into()));
            }
            check_size(*n, *d as u64)?;
            let total = (*d as u64).pow(*n as u32);
            let tuples = (0..total)
                .map(|code| {
                    // Digits of `code` in base d, most significant first, label
                    // elements 1..n with coordinates.
                    let mut parts = vec![0u64; *d];
                    let mut rest = code;
                    for element in (0..*n).rev() {
                        parts[(rest % *d as u64) as usize] |= 1 << element;
                        rest /= *d as u64;
                    }
                    SetTuple::from_masks(parts)
                })
                .collect();
            Ok(System::Set(SetSystem::new(*n, *d, tuples, None)?))
        }
        FamilyKind::Embedded(inner) => match construct(inner)? {
            System::Set(s) => Ok(System::Subspace(embed(&s))),
            System::Subspace(s) => Ok(System::Subspace(s)),
        },
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    /// Parses the `Display` form, e.g. `complement-chain(3)` or
    /// `partitioned-complement-chain(4;1,2;3,4)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("embedded(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Self::Embedded(Box::new(inner.parse()?)));
        }
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("expected name(params), got {s:?}")))?;
        let rest = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("missing ')' in {s:?}")))?;
        let mut groups = rest.split(';');
        let nums = |g: &str| -> Result<Vec<usize>> {
            g.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
                .collect()
        };
        let params = nums(groups.next().unwrap_or(""))?;
        let blocks: Vec<Vec<usize>> = groups.map(nums).collect::<Result<_>>()?;
        Self::from_parts(name.trim(), &params, (!blocks.is_empty()).then_some(blocks))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binomial, integer};
    use crate::verify::{check, Condition};
    use crate::weight::{omega, FunctionalKind};

    fn set(kind: FamilyKind) -> SetSystem {
        match construct(&kind).unwrap() {
            System::Set(s) => s,
            _ => unreachable!(),
        }
    }

    #[test]
    fn uniform_bollobas_examples() {
        let s = set(FamilyKind::UniformBollobas { a: 1, b: 1 });
        assert_eq!(s, SetSystem::pairs(2, &[(vec![1], vec![2]), (vec![2], vec![1])]).unwrap());
        let sys = System::Set(s);
        assert!(check(&sys, Condition::Bollobas).unwrap().verdict);
        assert_eq!(omega(&sys, &FunctionalKind::Bollobas).unwrap(), integer(1));
        for (a, b) in [(0, 3), (2, 3), (3, 3)] {
            let sys = construct(&FamilyKind::UniformBollobas { a, b }).unwrap();
            assert_eq!(num_bigint::BigUint::from(sys.len()), binomial((a + b) as u64, a as i64));
            assert_eq!(omega(&sys, &FunctionalKind::Bollobas).unwrap(), integer(1));
        }
    }

    #[test]
    fn complement_chain_examples() {
        let s = set(FamilyKind::ComplementChain { n: 2 });
        let expected = SetSystem::pairs(
            2,
            &[
                (vec![1, 2], vec![]),
                (vec![1], vec![2]),
                (vec![2], vec![1]),
                (vec![], vec![1, 2]),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);
        for n in 0..=5 {
            let sys = construct(&FamilyKind::ComplementChain { n }).unwrap();
            assert_eq!(sys.len(), 1 << n);
            assert!(check(&sys, Condition::Skew).unwrap().verdict);
            assert_eq!(omega(&sys, &FunctionalKind::Yue).unwrap(), integer(1));
            assert_eq!(omega(&sys, &FunctionalKind::HegedusFrankl).unwrap(), integer(n as i64 + 1));
            if n >= 1 {
                let r = check(&sys.reversed(), Condition::Skew).unwrap();
                assert!(!r.verdict);
            }
        }
    }

    #[test]
    fn partitioned_chain() {
        let kind = FamilyKind::PartitionedComplementChain {
            n: 4,
            blocks: vec![vec![1, 2], vec![3, 4]],
        };
        let sys = construct(&kind).unwrap();
        assert_eq!(omega(&sys, &FunctionalKind::PartitionedYue).unwrap(), integer(1));
        let bad = FamilyKind::PartitionedComplementChain {
            n: 2,
            blocks: vec![vec![1], vec![1, 2]],
        };
        assert!(matches!(construct(&bad), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn full_tuza_tuples() {
        let s = set(FamilyKind::FullTuzaTuples { n: 2, d: 2 });
        assert_eq!(s.tuples().len(), 4);
        let sys = System::Set(s);
        assert!(check(&sys, Condition::Weak).unwrap().verdict);
        let p = FunctionalKind::Tuza("1/3,2/3".parse().unwrap());
        assert_eq!(omega(&sys, &p).unwrap(), integer(1));
        let sys = construct(&FamilyKind::FullTuzaTuples { n: 3, d: 3 }).unwrap();
        assert_eq!(sys.len(), 27);
        let p = FunctionalKind::Tuza("1/2,1/4,1/4".parse().unwrap());
        assert_eq!(omega(&sys, &p).unwrap(), integer(1));
        let p = FunctionalKind::Tuza("1/5,3/10,1/2".parse().unwrap());
        assert_eq!(omega(&sys, &p).unwrap(), integer(1));
    }

    #[test]
    fn embedded_and_guards() {
        let sys = construct(&FamilyKind::Embedded(Box::new(FamilyKind::ComplementChain { n: 2 }))).unwrap();
        assert!(matches!(sys, System::Subspace(_)));
        assert!(check(&sys, Condition::Skew).unwrap().verdict);
        assert_eq!(omega(&sys, &FunctionalKind::Yue).unwrap(), integer(1));
        assert!(matches!(
            construct(&FamilyKind::ComplementChain { n: 30 }),
            Err(Error::EnumerationTooLarge(_))
        ));
        assert!(matches!(
            construct(&FamilyKind::FullTuzaTuples { n: 20, d: 3 }),
            Err(Error::EnumerationTooLarge(_))
        ));
    }

    #[test]
    fn parse_display_round_trip() {
        for kind in [
            FamilyKind::UniformBollobas { a: 2, b: 1 },
            FamilyKind::ComplementChain { n: 3 },
            FamilyKind::PartitionedComplementChain {
                n: 4,
                blocks: vec![vec![1, 2], vec![3, 4]],
            },
            FamilyKind::FullTuzaTuples { n: 3, d: 3 },
            FamilyKind::Embedded(Box::new(FamilyKind::ComplementChain { n: 1 })),
        ] {
            assert_eq!(kind.to_string().parse::<FamilyKind>().unwrap(), kind);
        }
        assert!("nope(1)".parse::<FamilyKind>().is_err());
    }
}
