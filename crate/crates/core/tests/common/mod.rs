#![allow(dead_code)]

use beamsym::{AlgebraElement, CaseKind, CaseParams, EpsilonVector, Family};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-unit parameters for each family.
pub fn params(f: Family) -> CaseParams {
    let kind = match f {
        Family::Equal => CaseKind::Equal,
        Family::Greater => CaseKind::Greater { lambda: 0.9 },
        Family::Less => CaseKind::Less { mu: 1.1 },
    };
    CaseParams::from_case(1.3, 0.7, 1.6, 1.2, kind).unwrap()
}

pub fn unit_params(f: Family) -> CaseParams {
    CaseParams::unit(f.name()).unwrap()
}

/// Magnitude in [0.25, 3] with random sign.
pub fn coef(r: &mut impl Rng) -> f64 {
    let m = r.gen_range(0.25..3.0);
    if r.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

pub fn dense(r: &mut impl Rng) -> AlgebraElement {
    let mut a = [0.0; 8];
    for v in &mut a {
        *v = r.gen_range(-3.0..3.0);
    }
    AlgebraElement(a)
}

pub fn leaf_count(f: Family) -> usize {
    match f {
        Family::Equal => 14,
        Family::Greater => 20,
        Family::Less => 10,
    }
}

/// Random element whose tree walk must end at `leaf`.
#[allow(clippy::needless_late_init)]
pub fn sample_leaf(f: Family, leaf: usize, r: &mut impl Rng) -> AlgebraElement {
    let mut a = [0.0; 8];
    for v in &mut a {
        *v = coef(r);
    }
    let zeros: &[usize];
    let mut ratio = None;
    match f {
        Family::Equal => {
            zeros = match leaf {
                1 => &[],
                2 => &[6],
                3 => &[1],
                4 => &[1, 6],
                5 => &[1, 6, 8],
                6 => &[1, 6, 8, 7],
                7 => &[1, 2],
                8 => &[1, 2, 6],
                9 => &[1, 2, 6, 8],
                10 => &[1, 2, 6, 8, 7],
                11 => &[1, 2, 6, 5],
                12 => &[1, 2, 6, 5, 4],
                13 => &[1, 2, 6, 5, 4, 8],
                14 => &[1, 2, 6, 5, 4, 8, 7],
                _ => panic!("leaf {leaf}"),
            };
        }
        Family::Greater => {
            zeros = match leaf {
                1 => &[],
                2 => &[6],
                3 => &[1],
                4..=8 => {
                    ratio = Some(leaf - 4);
                    &[1, 6]
                }
                9 => &[1, 2],
                10..=14 => {
                    ratio = Some(leaf - 10);
                    &[1, 2, 6]
                }
                15 => &[1, 2, 6, 5],
                16..=20 => {
                    ratio = Some(leaf - 16);
                    &[1, 2, 6, 5, 4]
                }
                _ => panic!("leaf {leaf}"),
            };
        }
        Family::Less => {
            zeros = match leaf {
                1 => &[],
                2 => &[6],
                3 => &[1],
                4 => &[1, 6],
                5 => &[1, 2],
                6 => &[1, 2, 6],
                7 => &[1, 2, 6, 4],
                8 => &[1, 2, 6, 4, 8],
                9 => &[1, 2, 6, 4, 5],
                10 => &[1, 2, 6, 4, 5, 8],
                _ => panic!("leaf {leaf}"),
            };
        }
    }
    for &i in zeros {
        a[i - 1] = 0.0;
    }
    if let Some(k) = ratio {
        let s = r.gen_range(-0.8..0.8);
        match k {
            0 => a[7] = a[6] * s,
            1 => a[6] = a[7] * s,
            2 => a[6] = a[7],
            3 => a[6] = -a[7],
            _ => {
                a[6] = 0.0;
                a[7] = 0.0;
            }
        }
    }
    AlgebraElement(a)
}

/// Evaluate a tree predicate such as `a7+a8!=0` or `(a7-a8)/(a7+a8)>0`.
pub fn predicate_holds(pred: &str, a: &AlgebraElement, band: f64) -> bool {
    let (lhs, op) = if let Some(l) = pred.strip_suffix("!=0") {
        (l, "!=")
    } else if let Some(l) = pred.strip_suffix("=0") {
        (l, "=")
    } else if let Some(l) = pred.strip_suffix(">0") {
        (l, ">")
    } else if let Some(l) = pred.strip_suffix("<0") {
        (l, "<")
    } else {
        panic!("unparseable predicate {pred}")
    };
    let (u, v) = (a[6] + a[7], a[6] - a[7]);
    let val = match lhs {
        "a7+a8" => u,
        "(a7-a8)/(a7+a8)" => {
            if v.abs() <= band {
                0.0
            } else {
                v / u
            }
        }
        s => {
            let i: usize = s
                .trim_start_matches('a')
                .parse()
                .expect("coefficient index");
            a[i - 1]
        }
    };
    match op {
        "!=" => val.abs() > band,
        "=" => val.abs() <= band,
        ">" => val > 0.0,
        _ => val < 0.0,
    }
}

pub type Commutator = (usize, usize, Vec<(usize, f64)>);

/// The six nonzero commutators as printed, `(i, j, [(m, coef)])`.
pub fn reference_commutators(p: &CaseParams) -> Vec<Commutator> {
    let (rho2, k, d) = (p.rho2, p.k, p.d);
    let mut v = vec![
        (1, 4, vec![(3, 1.0)]),
        (1, 6, vec![(5, 1.0)]),
        (2, 5, vec![(3, 1.0)]),
        (2, 6, vec![(4, 1.0)]),
    ];
    match p.family() {
        Family::Equal => {
            let s = (k / rho2).sqrt();
            v.push((1, 7, vec![(7, -s)]));
            v.push((1, 8, vec![(7, 1.0), (8, -s)]));
        }
        Family::Greater => {
            let (a, l) = (d / (2.0 * rho2), p.lambda() / (2.0 * rho2));
            v.push((1, 7, vec![(7, -a), (8, l)]));
            v.push((1, 8, vec![(8, -a), (7, l)]));
        }
        Family::Less => {
            let (a, m) = (d / (2.0 * rho2), p.mu() / (2.0 * rho2));
            v.push((1, 7, vec![(7, -a), (8, -m)]));
            v.push((1, 8, vec![(8, -a), (7, m)]));
        }
    }
    v
}

/// The composed matrix as printed, typed entry by entry.
pub fn reference_adjoint(e: &EpsilonVector, p: &CaseParams) -> [[f64; 8]; 8] {
    let g = |i| e.get(i);
    let (a, b) = (p.a_hat, p.b_hat);
    let (r17, r18, y) = match p.family() {
        Family::Equal => {
            let x = (-a * g(1)).exp();
            (a * g(7) - g(8), a * g(8), [[x, 0.0], [g(1) * x, x]])
        }
        Family::Greater => {
            let (m, q) = ((-g(1) * (a - b)).exp(), (-g(1) * (a + b)).exp());
            let (y1, y2) = (0.5 * (m + q), 0.5 * (m - q));
            (
                a * g(7) - b * g(8),
                a * g(8) - b * g(7),
                [[y1, y2], [y2, y1]],
            )
        }
        Family::Less => {
            let x = (-g(1) * a).exp();
            let (y1, y2) = (x * (g(1) * b).cos(), x * (g(1) * b).sin());
            (
                a * g(7) - b * g(8),
                a * g(8) + b * g(7),
                [[y1, -y2], [y2, y1]],
            )
        }
    };
    [
        [1.0, 0.0, -g(4), 0.0, -g(6), 0.0, r17, r18],
        [0.0, 1.0, -g(5), -g(6), 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, g(1), 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, g(2), 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, g(1) * g(2), g(2), g(1), 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, y[0][0], y[0][1]],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, y[1][0], y[1][1]],
    ]
}
