//! Acceptance criteria 1–8. Each test writes one `PASS`/`FAIL` line straight
//! to stderr, so it shows even when the harness captures output. For ordered
//! lines run `cargo test -p beamsym --test acceptance -- --test-threads=1`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use beamsym::adjoint::{adjoint_product, adjoint_series_matrix};
use beamsym::algebra::killing_closed_form;
use beamsym::group::{transform_solution_with, Reading};
use beamsym::manufactured::{manufactured_solution, Mode};
use beamsym::optimal::{class_count, representative, FreeParams, DEFAULT_TOL};
use beamsym::reduction::{ansatz_with, verify_row, Transcription, ZetaKind};
use beamsym::residual::Order;
use beamsym::{
    adjoint_composed, adjoint_single, bracket, classify, convergence_study, killing_form,
    scale_solution, solve_eta2, structure_constants, transform_solution, verify_conjugacy,
    AlgebraElement, CaseParams, ChiSpec, EpsilonVector, Error, Family, RowRef, SolutionField,
    Window,
};
use rand::Rng;

// pinned tolerances
const STRUCTURE_TOL: f64 = 1e-15;
const JACOBI_TOL: f64 = 1e-12;
const KILLING_TOL: f64 = 1e-10;
const ADJOINT_TOL: f64 = 1e-12;
const SERIES_TOL: f64 = 1e-10;
const INVARIANCE_TOL: f64 = 1e-8;
const CONJUGACY_TOL: f64 = 1e-8;
const ACTION_ORDER: f64 = 1.9;
const ACTION_MAX: f64 = 1e-5;
const ETA2_TOL: f64 = 1e-9;
const BASIS_TOL: f64 = 1e-12;
const ROW_ORDER: (f64, f64) = (1.8, 2.2);
const LINEAR_FACTOR: f64 = 10.0;

fn report(n: u32, name: &str, pass: bool, elapsed: Duration, limit_s: f64, detail: &str) {
    let secs = elapsed.as_secs_f64();
    let ok = pass && secs < limit_s;
    // bypasses the libtest capture
    let _ = writeln!(
        std::io::stderr(),
        "criterion {n} [{}] {name}: {detail} ({secs:.2}s, limit {limit_s}s)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
    assert!(secs < limit_s, "criterion {n} over time: {secs:.2}s");
}

fn random_element(r: &mut impl Rng) -> AlgebraElement {
    common::dense(r)
}

#[test]
fn criterion_1_structure_constants() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut jac = 0.0f64;
    let mut pattern = true;
    for f in Family::ALL {
        for p in [common::unit_params(f), common::params(f)] {
            let sc = structure_constants(&p);
            let table = common::reference_commutators(&p);
            let mut pairs: Vec<_> = table.iter().map(|(i, j, _)| (*i, *j)).collect();
            pairs.sort();
            pattern &= sc.nonzero_pairs() == pairs;
            for (i, j, terms) in table {
                let mut want = [0.0; 8];
                for (m, c) in terms {
                    want[m - 1] = c;
                }
                let got = sc.bracket_basis(i, j);
                let back = sc.bracket_basis(j, i);
                for ((g, b), w) in got.0.iter().zip(&back.0).zip(&want) {
                    worst = worst.max((g - w).abs()).max((b + w).abs());
                }
            }
            for i in 1..=8 {
                for j in 1..=8 {
                    for k in 1..=8 {
                        let (x, y, z) = (
                            AlgebraElement::e(i),
                            AlgebraElement::e(j),
                            AlgebraElement::e(k),
                        );
                        let s = bracket(&x, &bracket(&y, &z, &sc), &sc)
                            + bracket(&y, &bracket(&z, &x, &sc), &sc)
                            + bracket(&z, &bracket(&x, &y, &sc), &sc);
                        jac = jac.max(s.norm_inf());
                    }
                }
            }
        }
    }
    report(
        1,
        "commutator tables and Jacobi identity",
        pattern && worst <= STRUCTURE_TOL && jac <= JACOBI_TOL,
        start.elapsed(),
        1.0,
        &format!("pattern {pattern}, table dev {worst:.1e}, Jacobi {jac:.1e}"),
    );
}

#[test]
fn criterion_2_killing_form() {
    let start = Instant::now();
    let mut r = common::rng(102);
    let mut worst = 0.0f64;
    for f in Family::ALL {
        let p = common::params(f);
        let sc = structure_constants(&p);
        for _ in 0..1000 {
            let x = random_element(&mut r);
            let (a, b) = (killing_form(&x, &x, &sc), killing_closed_form(&x, &p));
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    report(
        2,
        "Killing form closed form vs trace",
        worst <= KILLING_TOL,
        start.elapsed(),
        5.0,
        &format!("3000 elements, max rel dev {worst:.1e}"),
    );
}

#[test]
fn criterion_3_adjoint_representation() {
    let start = Instant::now();
    let mut r = common::rng(103);
    let (mut reference, mut product, mut series, mut inv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for f in Family::ALL {
        let p = common::params(f);
        let sc = structure_constants(&p);
        for _ in 0..1000 {
            let mut e = [0.0; 8];
            for v in &mut e {
                *v = r.gen_range(-2.0..2.0);
            }
            let e = EpsilonVector(e);
            let a = adjoint_composed(&e, &p);
            product = product.max(a.max_abs_diff(&adjoint_product(&e, &p)));
            let want = common::reference_adjoint(&e, &p);
            for (i, row) in want.iter().enumerate() {
                for (j, w) in row.iter().enumerate() {
                    reference = reference.max((a.at(i + 1, j + 1) - w).abs());
                }
            }
            let (x, y) = (random_element(&mut r), random_element(&mut r));
            let k0 = killing_form(&x, &y, &sc);
            let k1 = killing_form(&a.apply(&x), &a.apply(&y), &sc);
            inv = inv.max((k1 - k0).abs() / k0.abs().max(1.0));
        }
        for i in 1..=8 {
            for _ in 0..20 {
                let eps = r.gen_range(-2.0..2.0);
                let d = adjoint_single(i, eps, &p)
                    .unwrap()
                    .max_abs_diff(&adjoint_series_matrix(i, eps, 30, &sc).unwrap());
                series = series.max(d);
            }
        }
    }
    let mut e4 = EpsilonVector::zero();
    e4.set(4, 1.0);
    let spot = adjoint_composed(&e4, &common::unit_params(Family::Equal)).at(1, 3);
    report(
        3,
        "adjoint representation",
        reference <= ADJOINT_TOL
            && product <= ADJOINT_TOL
            && series <= SERIES_TOL
            && inv <= INVARIANCE_TOL
            && spot == -1.0,
        start.elapsed(),
        30.0,
        &format!(
            "reference {reference:.1e}, product {product:.1e}, series {series:.1e}, Killing invariance {inv:.1e}, A13(eps4=1) = {spot}"
        ),
    );
}

#[test]
fn criterion_4_optimal_system() {
    let start = Instant::now();
    let mut r = common::rng(104);
    let mut leaves_hit = 0;
    let mut worst = 0.0f64;
    let (mut failures, mut unstable) = (0, 0);
    for f in Family::ALL {
        let p = common::params(f);
        let mut hit = vec![false; class_count(f)];
        for n in 0..10_000 {
            let a = if n % 2 == 0 {
                random_element(&mut r)
            } else {
                let leaf = r.gen_range(1..=common::leaf_count(f));
                common::sample_leaf(f, leaf, &mut r)
            };
            match classify(&a, &p, DEFAULT_TOL) {
                Ok(res) => {
                    hit[res.class_id.index - 1] = true;
                    if n % 10 == 1 {
                        let rep = representative(res.class_id, &res.free_params, 0.0).unwrap();
                        let again = classify(&rep, &p, DEFAULT_TOL);
                        let scaled = classify(&(a * -2.5), &p, DEFAULT_TOL);
                        let same = |o: &beamsym::Result<beamsym::ClassificationResult>| {
                            matches!(o, Ok(o) if o.class_id == res.class_id
                                && o.free_params.max_dev(&res.free_params) <= CONJUGACY_TOL)
                        };
                        if !same(&again) || !same(&scaled) {
                            unstable += 1;
                        }
                    }
                    let c = verify_conjugacy(&a, &res, &p);
                    worst = worst.max(c.max_rel_error);
                    if !c.pass {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
        leaves_hit += hit.iter().filter(|h| **h).count();
    }
    report(
        4,
        "optimal system classification",
        leaves_hit == 44 && failures == 0 && unstable == 0 && worst <= CONJUGACY_TOL,
        start.elapsed(),
        60.0,
        &format!("30000 elements, {leaves_hit}/44 leaves, {failures} failures, {unstable} idempotence/scaling breaks, worst conjugacy {worst:.1e}"),
    );
}

#[test]
fn criterion_5_symmetry_action() {
    let start = Instant::now();
    let mut r = common::rng(105);
    let chi = ChiSpec::cubic(1.0, 0.3);
    let w = Window::unit();
    let bases = [
        SolutionField::closed_form("x,-1", |_, x| x, |_, _| -1.0),
        SolutionField::closed_form("ct,0", |t, _| 0.7 * t, |_, _| 0.0),
    ];
    let (mut min_order, mut max_res) = (f64::INFINITY, 0.0f64);
    let mut draw = || {
        let mut e = [0.0; 8];
        for v in &mut e {
            *v = r.gen_range(-1.0..1.0);
        }
        EpsilonVector(e)
    };
    let order_of = |o: Order| match o {
        Order::Exact => f64::INFINITY,
        Order::Observed(v) => v,
    };
    let mut literal = String::new();
    for f in Family::ALL {
        let p = common::unit_params(f);
        for base in &bases {
            for _ in 0..2 {
                let e = draw();
                let st = convergence_study(
                    &transform_solution(base, &e, &p).unwrap(),
                    &chi,
                    &p,
                    &w,
                    101,
                    3,
                )
                .unwrap();
                min_order = min_order.min(order_of(st.final_order()));
                max_res = max_res.max(st.finest().max());
            }
        }
        if f == Family::Greater {
            let e = draw();
            let lit = transform_solution_with(&bases[0], &e, &p, Reading::Literal).unwrap();
            let st = convergence_study(&lit, &chi, &p, &w, 101, 3).unwrap();
            let gap = (lit.eval(0.5, 0.5).1
                - transform_solution(&bases[0], &e, &p)
                    .unwrap()
                    .eval(0.5, 0.5)
                    .1)
                .abs();
            literal = format!(
                "; literal greater reading: order {:.3}, finest {:.1e}, differs from composition by {gap:.1e}",
                order_of(st.final_order()),
                st.finest().max()
            );
        }
    }
    report(
        5,
        "symmetry action on exact solutions",
        min_order >= ACTION_ORDER && max_res <= ACTION_MAX,
        start.elapsed(),
        60.0,
        &format!("min order {min_order:.3}, finest max {max_res:.1e}{literal}"),
    );
}

fn eta2_reference(p: &CaseParams, c5: f64, c6: f64, f0: [f64; 2], t_end: f64) -> f64 {
    let rhs = |t: f64, y: [f64; 2]| {
        [
            y[1],
            (-c6 * p.k * t - c5 * p.k - p.d * y[1] - p.k * y[0]) / p.rho2,
        ]
    };
    let n = (t_end / 1e-3).ceil().max(1.0) as usize;
    let h = t_end / n as f64;
    let mut y = f0;
    for i in 0..n {
        let t = i as f64 * h;
        let k1 = rhs(t, y);
        let k2 = rhs(
            t + h / 2.0,
            [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]],
        );
        let k3 = rhs(
            t + h / 2.0,
            [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]],
        );
        let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    y[0]
}

#[test]
fn criterion_6_eta2_solver() {
    let start = Instant::now();
    let mut r = common::rng(106);
    let (mut worst, mut ode) = (0.0f64, 0.0f64);
    for f in Family::ALL {
        let p = common::params(f);
        for _ in 0..100 {
            let (c5, c6) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let ics = [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)];
            let t = r.gen_range(0.0..10.0);
            let s = solve_eta2(&p, c5, c6, ics);
            worst = worst.max((s.value(t) - eta2_reference(&p, c5, c6, ics, t)).abs());
            for i in 0..=50 {
                let t = i as f64 * 0.2;
                let res =
                    p.rho2 * s.d2(t) + p.d * s.d1(t) + p.k * s.value(t) + c6 * p.k * t + c5 * p.k;
                ode = ode.max(res.abs());
            }
        }
    }
    let p = common::params(Family::Equal);
    let u = solve_eta2(&p, 0.0, 0.0, [p.f7(0.0), p.df7(0.0)]);
    let v = solve_eta2(&p, 0.0, 0.0, [p.f8(0.0), p.df8(0.0)]);
    let mut basis = 0.0f64;
    for i in 0..=100 {
        let t = i as f64 * 0.1;
        basis = basis
            .max((u.value(t) - p.f7(t)).abs())
            .max((v.value(t) - p.f8(t)).abs());
    }
    report(
        6,
        "eta2 closed-form solver",
        worst <= ETA2_TOL && ode <= ETA2_TOL && basis <= BASIS_TOL,
        start.elapsed(),
        30.0,
        &format!("300 inputs, vs integration {worst:.1e}, ODE residual {ode:.1e}; equal basis vs f7/f8 {basis:.1e}"),
    );
}

#[test]
fn criterion_7_reductions() {
    let start = Instant::now();
    let chi = ChiSpec::cubic(1.0, 0.3);
    let w = Window::unit();
    let ics = [0.1, -0.2, 0.3, 0.1];
    let mut bad = Vec::new();
    let mut flagged = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for row in RowRef::all() {
        let d = row.descriptor().unwrap();
        let (a, b, g) = match d.zeta {
            ZetaKind::Time => (0.6, 0.5, -0.3),
            ZetaKind::Traveling => (0.4, 0.7, 0.0),
        };
        let used = |s: &str, v: f64| d.uses.iter().any(|u| u == s).then_some(v);
        let fp = FreeParams::new(used("alpha", a), used("beta", b), used("gamma", g));
        let p = common::unit_params(row.family);
        let run = |tr| {
            let s = ansatz_with(row, &fp, &p, tr).unwrap();
            verify_row(&s, &chi, ics, &w, 1e-3, 101, 3).unwrap()
        };
        let fixed = run(Transcription::Corrected);
        match fixed.study.final_order() {
            Order::Observed(o) if (ROW_ORDER.0..=ROW_ORDER.1).contains(&o) => {
                lo = lo.min(o);
                hi = hi.max(o);
            }
            o => bad.push(format!("{row} {o:?}")),
        }
        if d.correction.is_some() {
            let printed = run(Transcription::Printed);
            let o = printed.study.final_order();
            if o.at_least(ROW_ORDER.0) {
                bad.push(format!("{row} printed form unexpectedly converges"));
            }
            flagged.push(format!(
                "{row} printed residual {:.2e}",
                printed.study.finest().max()
            ));
        }
    }
    report(
        7,
        "reduced equations for every row",
        bad.is_empty(),
        start.elapsed(),
        300.0,
        &format!(
            "18 rows, orders {lo:.3}..{hi:.3}; flagged: {}{}",
            flagged.join(", "),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", bad.join(", "))
            }
        ),
    );
}

fn random_modes(r: &mut impl Rng) -> Vec<Mode> {
    (0..r.gen_range(1..=3))
        .map(|_| Mode {
            kappa: r.gen_range(0.3..3.0),
            theta: r.gen_range(-3.0..3.0),
            y0: [
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            ],
        })
        .collect()
}

#[test]
fn criterion_8_linear_case() {
    let start = Instant::now();
    let mut r = common::rng(108);
    let w = Window::unit();
    let (mut worst_ratio, mut min_order) = (0.0f64, f64::INFINITY);
    let mut scaling_guard = true;
    // 10 parameter sets, two manufactured solutions each
    for n in 0..10 {
        let p = common::params(Family::ALL[n % 3]);
        let lin = ChiSpec::linear(p.b);
        let res = |f: &SolutionField| {
            let st = convergence_study(f, &lin, &p, &w, 41, 3).unwrap();
            let o = match st.final_order() {
                Order::Exact => f64::INFINITY,
                Order::Observed(v) => v,
            };
            (st.finest().max(), o)
        };
        let a = manufactured_solution(&random_modes(&mut r), &p, p.b, &w).unwrap();
        let b = manufactured_solution(&random_modes(&mut r), &p, p.b, &w).unwrap();
        let ((ra, oa), (rb, ob)) = (res(&a), res(&b));
        let (rs, os) = res(&a.add(&b));
        let eps = r.gen_range(-1.0..1.0);
        let (rc, oc) = res(&scale_solution(&a, eps, &lin).unwrap());
        worst_ratio = worst_ratio.max(rs / (ra + rb)).max(rc / (eps.exp() * ra));
        min_order = min_order.min(oa).min(ob).min(os).min(oc);
        scaling_guard &= scale_solution(&a, eps, &ChiSpec::cubic(p.b, 0.3)).unwrap_err()
            == Error::RequiresLinearChi;
    }
    report(
        8,
        "linear-law superposition and scaling",
        worst_ratio <= LINEAR_FACTOR && min_order >= ACTION_ORDER && scaling_guard,
        start.elapsed(),
        30.0,
        &format!("20 manufactured solutions, worst residual ratio {worst_ratio:.2}, min order {min_order:.3}"),
    );
}
