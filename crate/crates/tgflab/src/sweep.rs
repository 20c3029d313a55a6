//! Parameter grids for `verify` and `kuo`.

use tgflab_core::kuo::Recurrence;
use tgflab_core::{Family, RegionSpec};

use crate::args::VerifyArgs;

const MAX_SUBSET_TOP: i64 = 20;

pub fn subsets(top: i64) -> Vec<Vec<i64>> {
    let top = top.max(0);
    (0u32..1 << top)
        .map(|mask| (1..=top).filter(|k| mask >> (k - 1) & 1 == 1).collect())
        .collect()
}

pub fn combinations(top: i64, k: i64) -> Vec<Vec<i64>> {
    subsets(top)
        .into_iter()
        .filter(|s| s.len() as i64 == k)
        .collect()
}

/// Every spec in the grid, in family order then parameter order.
pub fn verify_grid(args: &VerifyArgs) -> Result<Vec<RegionSpec>, String> {
    for (name, span) in [("n", args.n), ("d", args.d), ("u", args.u)] {
        if span.hi > MAX_SUBSET_TOP || args.x.hi + span.hi > MAX_SUBSET_TOP {
            return Err(format!(
                "invalid parameters: --{name} range too large for a sweep"
            ));
        }
    }
    let families: Vec<Family> = if args.family.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.family.clone()
    };
    let mut out = Vec::new();
    for family in families {
        for x in args.x.values() {
            grid_for(family, x, args, &mut out);
        }
    }
    Ok(out)
}

fn grid_for(family: Family, x: i64, args: &VerifyArgs, out: &mut Vec<RegionSpec>) {
    match family {
        Family::P | Family::Pprime => {
            let prime = family == Family::Pprime;
            out.extend(args.n.values().map(|n| RegionSpec::halved(prime, n, x)));
        }
        Family::R1 | Family::R2 | Family::R3 | Family::R4 => {
            let kind = family.quartered_kind().unwrap_or(1);
            for n in args.n.values() {
                for s in combinations(x + n, n) {
                    out.push(RegionSpec::quartered(kind, x, &s));
                }
            }
        }
        Family::A | Family::B => {
            for d in args.d.values() {
                for l in subsets(d) {
                    out.push(if family == Family::A {
                        RegionSpec::type_a(x, d, &l)
                    } else {
                        RegionSpec::type_b(x, d, &l)
                    });
                }
            }
        }
        Family::C | Family::D => {
            for u in args.u.values() {
                for h in subsets(u) {
                    out.push(if family == Family::C {
                        RegionSpec::type_c(x, u, &h)
                    } else {
                        RegionSpec::type_d(x, u, &h)
                    });
                }
            }
        }
        Family::S | Family::T => {
            for u in args.u.values() {
                for d in args.d.values() {
                    for l in subsets(d) {
                        for h in subsets(u) {
                            out.push(if family == Family::S {
                                RegionSpec::type_s(x, u, d, &l, &h)
                            } else {
                                RegionSpec::type_t(x, u, d, &l, &h)
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Candidate specs for a recurrence; those failing its precondition are
/// filtered out by the caller.
pub fn recurrence_grid(which: Recurrence) -> Vec<RegionSpec> {
    let mut out = Vec::new();
    match which {
        Recurrence::HalvedP | Recurrence::HalvedPprime => {
            let prime = which == Recurrence::HalvedPprime;
            for n in 2..=4 {
                for x in 1..=5 - n {
                    out.push(RegionSpec::halved(prime, n, x));
                }
            }
        }
        Recurrence::QuarteredR1 => {
            for x in 1..=2 {
                for n in 2..=3 {
                    for s in combinations(x + n, n) {
                        out.push(RegionSpec::quartered(1, x, &s));
                    }
                }
            }
        }
        Recurrence::TypeACase1 | Recurrence::TypeACase2 | Recurrence::TypeB => {
            for x in 1..=2 {
                for d in 1..=3 {
                    for l in subsets(d) {
                        out.push(if which == Recurrence::TypeB {
                            RegionSpec::type_b(x, d, &l)
                        } else {
                            RegionSpec::type_a(x, d, &l)
                        });
                    }
                }
            }
        }
        Recurrence::TypeS => {
            for x in 1..=2 {
                for u in 1..=2 {
                    for d in 1..=2 {
                        for l in subsets(d) {
                            for h in subsets(u) {
                                out.push(RegionSpec::type_s(x, u, d, &l, &h));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Engine, Out, Span};

    fn verify_args(family: Vec<Family>, x: &str, n: &str) -> VerifyArgs {
        VerifyArgs {
            family,
            x: x.parse().unwrap(),
            n: n.parse().unwrap(),
            d: Span { lo: 0, hi: 1 },
            u: Span { lo: 0, hi: 1 },
            scheme: None,
            engine: Engine::Profile,
            corrected: false,
            timings: false,
            out: Out::Text,
        }
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(0), vec![Vec::<i64>::new()]);
        assert_eq!(subsets(3).len(), 8);
        assert_eq!(combinations(4, 2).len(), 6);
    }

    #[test]
    fn empty_range_is_empty_grid() {
        let a = verify_args(vec![], "1..0", "0..2");
        assert!(verify_grid(&a).unwrap().is_empty());
    }

    #[test]
    fn quartered_grid_size() {
        let a = verify_args(vec![Family::R1], "0..1", "1..2");
        // x=0: C(1,1)+C(2,2); x=1: C(2,1)+C(3,2)
        assert_eq!(verify_grid(&a).unwrap().len(), 1 + 1 + 2 + 3);
    }

    #[test]
    fn grid_specs_are_valid() {
        let a = verify_args(vec![], "0..1", "0..2");
        for spec in verify_grid(&a).unwrap() {
            spec.validate().unwrap();
        }
        for which in Recurrence::ALL {
            for spec in recurrence_grid(which) {
                assert_eq!(spec.family, which.family());
                spec.validate().unwrap();
            }
        }
    }
}
