//! Degree bounds for Omega classes, over every small parameter set.

use taut_core::exact::ExactRational;
use taut_core::intersection::dimension;
use taut_core::omega::{degree_bound, degree_bound_check, first_nonvacuous_negative_s, DegreeBound, OmegaSpec};

fn spec(r: u32, s: i64, a: &[i64]) -> OmegaSpec {
    OmegaSpec::new(r, s, a.to_vec(), ExactRational::one())
}

/// Non-decreasing vectors of length `n` with entries in `lo..=hi`.
fn vectors(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in vectors(n - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn types(max_dim: i64) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=2u32 {
        for n in 0..=8usize {
            let d = dimension(g, n);
            if (1..=max_dim).contains(&d) && (g > 0 || n >= 3) {
                out.push((g, n));
            }
        }
    }
    out
}

#[test]
fn spec_examples_are_vacuous() {
    let cases = [
        (0, 4, spec(2, 0, &[1, 1, 1, 1]), DegreeBound::Jkv, 1),
        (1, 1, spec(2, -1, &[1]), DegreeBound::NegativeS, 1),
        (1, 2, spec(2, -1, &[1, 1]), DegreeBound::NegativeS, 2),
    ];
    for (g, n, sp, kind, want) in cases {
        assert_eq!(degree_bound(g, n, &sp, kind).unwrap(), want);
        let rep = degree_bound_check(g, n, &sp, kind).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.note.as_deref(), Some("vacuous: bound >= dimension"));
    }
}

#[test]
fn first_nonvacuous_negative_s_case() {
    let (g, n, sp, b) = first_nonvacuous_negative_s(6, 3).unwrap();
    assert_eq!((g, n, sp.r, sp.s, sp.a.clone(), b), (1, 3, 3, -1, vec![1, 1, 1], 2));
    assert!(degree_bound_check(g, n, &sp, DegreeBound::NegativeS).unwrap().pass);
}

#[test]
fn negative_s_bound_holds() {
    let mut nonvacuous = 0;
    for (g, n) in types(4) {
        for r in 1..=3u32 {
            for s in -3..=-1i64 {
                for a in vectors(n, 1, r as i64) {
                    let sp = spec(r, s, &a);
                    if sp.validate(g, n).is_err() {
                        continue;
                    }
                    let rep = degree_bound_check(g, n, &sp, DegreeBound::NegativeS).unwrap();
                    assert!(rep.pass, "{}", rep.to_json_line());
                    nonvacuous += usize::from(rep.note.is_none());
                }
            }
        }
    }
    assert!(nonvacuous > 0);
}

#[test]
fn genus_zero_bound_holds() {
    let mut nonvacuous = 0;
    for n in 3..=7usize {
        for r in 1..=4u32 {
            // all positive, or one entry in {-1, 0}
            let mut cands = vectors(n, 1, r as i64);
            for low in [-1i64, 0] {
                for mut rest in vectors(n - 1, 1, r as i64) {
                    rest.insert(0, low);
                    cands.push(rest);
                }
            }
            for a in cands {
                let sp = spec(r, 0, &a);
                if sp.validate(0, n).is_err() {
                    continue;
                }
                let rep = degree_bound_check(0, n, &sp, DegreeBound::Jkv).unwrap();
                assert!(rep.pass, "{}", rep.to_json_line());
                nonvacuous += usize::from(rep.note.is_none());
            }
        }
    }
    assert!(nonvacuous > 0);
}
