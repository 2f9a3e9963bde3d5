//! The verification battery behind `polydisk verify`.
//!
//! Every criterion draws its parameters from a seeded ChaCha stream, so a run
//! is reproducible from the seed alone.

use std::f64::consts::TAU;
use std::time::Instant;

use nalgebra::DVector;
use polydisk::analysis::{
    check_normal, hermitian_residual, kernel_image_bound, norm_probe, null_space, polar_grid,
    symmetry_residual,
};
use polydisk::hardy::{derivative_kernel, kernel};
use polydisk::operators::{adjoint_kernel_image, kernel_image_norm, matrix_section_with};
use polydisk::par::map_collect;
use polydisk::symbols::{classify, hermitian_family, j_symmetric_family, SymbolForm};
use polydisk::{
    Caps, Complex64, Execution, MultiIndex, OperatorSpec, Point, Symbol, TruncatedSeries,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x9d1_5c0f;

/// `(id, name, description)` of every criterion the battery runs.
pub const CRITERIA: [(usize, &str, &str); 9] = [
    (
        1,
        "j_symmetry",
        "complex symmetric family sections are symmetric",
    ),
    (
        2,
        "converse_sensitivity",
        "perturbed weights break symmetry and classify as neither",
    ),
    (
        3,
        "hermitian",
        "self-adjoint family sections are Hermitian; Im(a) breaks it",
    ),
    (
        4,
        "normality",
        "c = 0 sections are diagonal with product-formula norms",
    ),
    (
        5,
        "adjoint_kernel",
        "tall-section adjoint reproduces W* K_w",
    ),
    (
        6,
        "reproducing",
        "kernels reproduce values and mixed partials",
    ),
    (
        7,
        "kernel_dimension",
        "null spaces match the monomial-kill count",
    ),
    (
        8,
        "boundedness",
        "kernel images obey the bound; ladder norms settle",
    ),
    (9, "classification", "classify recovers family parameters"),
];

#[derive(Clone, Copy, Debug)]
pub struct Battery {
    pub seed: u64,
    /// Multiplies every upper tolerance; 1 for a real run.
    pub tol_scale: f64,
    pub exec: Execution,
}

impl Default for Battery {
    fn default() -> Self {
        Battery {
            seed: DEFAULT_SEED,
            tol_scale: 1.0,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

type Check = Result<(bool, String), String>;

pub fn run(id: usize, battery: &Battery) -> Outcome {
    let start = Instant::now();
    let result: Check = match id {
        1 => j_symmetry(battery),
        2 => converse_sensitivity(battery),
        3 => hermitian(battery),
        4 => normality(battery),
        5 => adjoint_kernel(battery),
        6 => reproducing(battery),
        7 => kernel_dimension(battery),
        8 => boundedness(battery),
        9 => classification(battery),
        _ => Err(format!("no criterion {id}")),
    };
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1);
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(battery: &Battery) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.0, battery)).collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn rng(battery: &Battery, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(battery.seed ^ (id << 32))
}

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

fn signed(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(if rng.gen::<bool>() { r } else { -r }, 0.0)
}

#[derive(Clone, Debug)]
struct Draw {
    a: Complex64,
    c: Vec<Complex64>,
    d: Vec<Complex64>,
    k: MultiIndex,
}

/// `|c_i| <= c_max`, `|d_i| <= d_frac (1 - |c_i|)^2` (capped at `d_max`),
/// `0.5 <= |a| <= 2`, `k_i <= 2`; `a` and `d` real when `real` is set.
fn draw(rng: &mut ChaCha8Rng, n: usize, real: bool, c_max: f64, d_frac: f64, d_max: f64) -> Draw {
    let ra = rng.gen_range(0.5..=2.0);
    let a = if real {
        signed(rng, ra)
    } else {
        polar(ra, rng.gen_range(0.0..TAU))
    };
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut k = Vec::with_capacity(n);
    for _ in 0..n {
        let rc = rng.gen_range(0.0..=c_max);
        c.push(polar(rc, rng.gen_range(0.0..TAU)));
        let rd = rng.gen_range(0.05..=1.0) * (d_frac * (1.0 - rc).powi(2)).min(d_max);
        d.push(if real {
            signed(rng, rd)
        } else {
            polar(rd, rng.gen_range(0.0..TAU))
        });
        k.push(rng.gen_range(0..=2));
    }
    Draw {
        a,
        c,
        d,
        k: MultiIndex::new(k),
    }
}

fn j_spec(p: &Draw) -> Result<OperatorSpec, String> {
    j_symmetric_family(p.a, &p.c, &p.d, &p.k).map_err(err)
}

fn h_spec(p: &Draw) -> Result<OperatorSpec, String> {
    hermitian_family(p.a, &p.c, &p.d, &p.k).map_err(err)
}

const SYMMETRY_SPECS: usize = 20;
const SECTION_CAP: usize = 10;
const RUN_LIMIT_SECONDS: f64 = 10.0;

fn symmetric_draws(battery: &Battery) -> Vec<Draw> {
    let mut rng = rng(battery, 1);
    (0..SYMMETRY_SPECS)
        .map(|i| draw(&mut rng, 1 + i % 3, false, 0.4, 0.8, 1.0))
        .collect()
}

fn j_symmetry(battery: &Battery) -> Check {
    let tol = 1e-10 * battery.tol_scale;
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for p in symmetric_draws(battery) {
        let t = Instant::now();
        let spec = j_spec(&p)?;
        let caps = Caps::uniform(p.k.arity(), SECTION_CAP);
        let m = matrix_section_with(&spec, caps.clone(), caps, battery.exec).map_err(err)?;
        let rel = symmetry_residual(&m).map_err(err)? / m.max_abs_entry();
        worst = worst.max(rel);
        slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    Ok((
        worst <= tol && slowest < RUN_LIMIT_SECONDS,
        format!(
            "{SYMMETRY_SPECS} specs, max relative residual {worst:.2e} (limit {tol:.0e}), slowest run {slowest:.2} s (limit {RUN_LIMIT_SECONDS} s)"
        ),
    ))
}

fn converse_sensitivity(battery: &Battery) -> Check {
    let mut smallest = f64::INFINITY;
    let mut misclassified = 0;
    for p in symmetric_draws(battery) {
        let spec = j_spec(&p)?;
        let n = p.k.arity();
        let caps = Caps::uniform(n, SECTION_CAP);
        let mut bump = vec![0; n];
        bump[0] = p.k[0] + 1;
        let u = spec.weight_series(caps.clone()).map_err(err)?;
        let z = TruncatedSeries::monomial(&MultiIndex::new(bump), caps.clone());
        let perturbed = TruncatedSeries::linear_combine(&[
            (Complex64::new(1.0, 0.0), &u),
            (Complex64::new(1e-2, 0.0), &z),
        ])
        .map_err(err)?;
        let spec = spec
            .with_weight(Symbol::Series(perturbed.clone()))
            .map_err(err)?;
        let m =
            matrix_section_with(&spec, caps.clone(), caps.clone(), battery.exec).map_err(err)?;
        smallest = smallest.min(symmetry_residual(&m).map_err(err)?);
        let v: Vec<_> = spec.maps().iter().map(|m| m.expand(SECTION_CAP)).collect();
        let form = classify(&perturbed, &v, &p.k, crate::defaults::CLASSIFY_TOL)
            .map_err(err)?
            .form;
        if form != SymbolForm::Neither {
            misclassified += 1;
        }
    }
    Ok((
        smallest >= 5e-3 && misclassified == 0,
        format!("min symmetry residual {smallest:.3e} (need >= 5e-3), {misclassified} perturbed symbols not classified as neither"),
    ))
}

fn hermitian(battery: &Battery) -> Check {
    let tol = 1e-10 * battery.tol_scale;
    let mut rng = rng(battery, 3);
    let mut worst = 0.0f64;
    let mut smallest_tilted = f64::INFINITY;
    for i in 0..SYMMETRY_SPECS {
        let p = draw(&mut rng, 1 + i % 3, true, 0.4, 0.8, 1.0);
        let spec = h_spec(&p)?;
        let caps = Caps::uniform(p.k.arity(), SECTION_CAP);
        let m =
            matrix_section_with(&spec, caps.clone(), caps.clone(), battery.exec).map_err(err)?;
        worst = worst.max(hermitian_residual(&m).map_err(err)? / m.max_abs_entry());

        let Symbol::Rational(u) = spec.weight() else {
            return Err("family weight is not rational".into());
        };
        let tilted = u.with_scale(p.a + Complex64::new(0.0, 1e-2)).map_err(err)?;
        let spec = spec.with_weight(Symbol::Rational(tilted)).map_err(err)?;
        let m = matrix_section_with(&spec, caps.clone(), caps, battery.exec).map_err(err)?;
        smallest_tilted = smallest_tilted.min(hermitian_residual(&m).map_err(err)?);
    }
    Ok((
        worst <= tol && smallest_tilted > 1e-3,
        format!(
            "{SYMMETRY_SPECS} specs, max relative residual {worst:.2e} (limit {tol:.0e}); with Im(a) = 1e-2 min residual {smallest_tilted:.3e} (need > 1e-3)"
        ),
    ))
}

fn normality(battery: &Battery) -> Check {
    let cap = 12;
    let off_tol = 1e-14 * battery.tol_scale;
    let norm_tol = 1e-12 * battery.tol_scale;
    let mut rng = rng(battery, 4);
    let zero = Complex64::new(0.0, 0.0);
    let mut draws = vec![Draw {
        a: Complex64::new(2.0, 0.0),
        c: vec![zero],
        d: vec![Complex64::new(0.5, 0.0)],
        k: MultiIndex::new(vec![1]),
    }];
    for i in 0..8 {
        let mut p = draw(&mut rng, 1 + i % 2, i % 2 == 1, 0.0, 1.0, 0.9);
        p.c = vec![zero; p.k.arity()];
        draws.push(p);
    }
    let mut off = 0.0f64;
    let mut commutator = 0.0f64;
    let mut deviation = 0.0f64;
    let mut example = f64::NAN;
    for (i, p) in draws.iter().enumerate() {
        let spec = j_spec(p)?;
        let caps = Caps::uniform(p.k.arity(), cap);
        let r = check_normal(&spec, caps.clone(), caps, 1e-6).map_err(err)?;
        off = off.max(r.off_diagonal);
        commutator = commutator.max(r.commutator);
        for b in &r.basis {
            let want = b
                .closed_form
                .ok_or("c = 0 spec without closed-form norms")?;
            deviation = deviation
                .max((b.image_norm - want).abs())
                .max((b.adjoint_image_norm - want).abs());
            if i == 0 && b.index == MultiIndex::new(vec![3]) {
                example = b.image_norm;
            }
        }
    }
    let example_ok = (example - 1.5).abs() <= norm_tol * 1.5;
    Ok((
        off <= off_tol && commutator <= off_tol && deviation <= norm_tol && example_ok,
        format!(
            "{} specs at caps {cap}: off-diagonal {off:.1e}, commutator {commutator:.1e} (limit {off_tol:.0e}), norm deviation {deviation:.1e} (limit {norm_tol:.0e}), ||W e_3|| = {example} for a=2, d=0.5, k=1",
            draws.len()
        ),
    ))
}

fn adjoint_kernel(battery: &Battery) -> Check {
    let tol = 1e-6 * battery.tol_scale;
    let (inner, block) = (60, 20);
    let mut rng = rng(battery, 5);
    let mut worst = 0.0f64;
    let specs = 10;
    for i in 0..specs {
        let hermitian = i % 2 == 1;
        let p = draw(&mut rng, 1, hermitian, 0.3, 1.0, 0.3);
        let spec = if hermitian { h_spec(&p)? } else { j_spec(&p)? };
        let w = Point::new(vec![polar(
            rng.gen_range(0.0..=0.3),
            rng.gen_range(0.0..TAU),
        )]);
        let tall =
            matrix_section_with(&spec, vec![inner], vec![block], battery.exec).map_err(err)?;
        let kw = kernel(&w, vec![inner]).map_err(err)?;
        let x = tall.entries().adjoint() * DVector::from_column_slice(kw.coeffs());
        let want = adjoint_kernel_image(&spec, &w, vec![block]).map_err(err)?;
        let dev = x
            .iter()
            .zip(want.coeffs())
            .fold(0.0f64, |m, (g, e)| m.max((g - e).norm()));
        worst = worst.max(dev);
    }
    Ok((
        worst <= tol,
        format!("{specs} specs, inner cap {inner}: max coefficient deviation {worst:.2e} (limit {tol:.0e})"),
    ))
}

fn reproducing(battery: &Battery) -> Check {
    let tol = 1e-13 * battery.tol_scale;
    let mut rng = rng(battery, 6);
    let mut worst = 0.0f64;
    let polys = 50;
    for i in 0..polys {
        let n = 1 + i % 3;
        let caps = Caps::uniform(n, 8);
        let f = TruncatedSeries::from_fn(caps.clone(), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let w = Point::new(
            (0..n)
                .map(|_| polar(rng.gen_range(0.0..=0.7), rng.gen_range(0.0..TAU)))
                .collect(),
        );
        let k = MultiIndex::new((0..n).map(|_| rng.gen_range(0..=2)).collect());
        for (kern, want) in [
            (kernel(&w, caps.clone()), f.evaluate(&w)),
            (
                derivative_kernel(&w, &k, caps.clone()),
                f.partial_derivative(&k).and_then(|g| g.evaluate(&w)),
            ),
        ] {
            let kern = kern.map_err(err)?;
            let want = want.map_err(err)?;
            let got = TruncatedSeries::inner_product(&f, &kern).map_err(err)?;
            worst = worst.max((got - want).norm());
        }
    }
    Ok((
        worst <= tol,
        format!(
            "{polys} polynomials in up to 3 variables, max deviation {worst:.2e} (limit {tol:.0e})"
        ),
    ))
}

fn kernel_dimension(battery: &Battery) -> Check {
    let rank_tol = 1e-8;
    let limit = 5.0;
    let span_tol = 1e-8 * battery.tol_scale;
    let c = |re: f64, im: f64| Complex64::new(re, im);

    let t = Instant::now();
    let one = j_symmetric_family(
        c(1.0, 0.0),
        &[c(0.2, 0.1)],
        &[c(0.5, 0.0)],
        &MultiIndex::new(vec![2]),
    )
    .map_err(err)?;
    let r1 = null_space(&one, vec![8], rank_tol).map_err(err)?;
    let t1 = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let two = j_symmetric_family(
        c(1.0, 0.5),
        &[c(0.2, 0.0), c(0.0, -0.1)],
        &[c(0.4, 0.0), c(0.3, 0.1)],
        &MultiIndex::new(vec![1, 1]),
    )
    .map_err(err)?;
    let r2 = null_space(&two, vec![4, 4], rank_tol).map_err(err)?;
    let t2 = t.elapsed().as_secs_f64();

    let ok1 = r1.dim_computed == 2
        && r1.dim_derived_claim == 2
        && r1.dim_paper_claim == 2
        && r1.dim_adjoint == 2
        && r1.derived_span_residual <= span_tol
        && r1.paper_containment_residual <= span_tol
        && !r1.paper_discrepancy;
    let ok2 = r2.dim_computed == 9
        && r2.dim_derived_claim == 9
        && r2.dim_paper_claim == 3
        && r2.dim_adjoint == 9
        && r2.derived_span_residual <= span_tol
        && r2.paper_discrepancy;
    Ok((
        ok1 && ok2 && t1 < limit && t2 < limit,
        format!(
            "n=1 k=2 caps 8: dim {} (adjoint {}, span residual {:.1e}); n=2 k=(1,1) caps (4,4): dim {} (adjoint {}, monomial-kill count {}, degree < 2 count {}, discrepancy flagged: {})",
            r1.dim_computed,
            r1.dim_adjoint,
            r1.derived_span_residual.max(r1.paper_containment_residual),
            r2.dim_computed,
            r2.dim_adjoint,
            r2.dim_derived_claim,
            r2.dim_paper_claim,
            r2.paper_discrepancy
        ),
    ))
}

fn boundedness(battery: &Battery) -> Check {
    let mut rng = rng(battery, 8);
    let specs = 9;
    let ladder: Vec<usize> = (4..=12).collect();
    let variation_tol = 0.05 * battery.tol_scale;
    let mut violations = 0;
    let mut samples = 0;
    let mut worst_ratio = 0.0f64;
    let mut worst_variation = 0.0f64;
    let mut monotone = true;
    for i in 0..specs {
        let n = 1 + i % 3;
        let hermitian = i % 2 == 1;
        let p = draw(&mut rng, n, hermitian, 0.3, 1.0, 0.3);
        let spec = if hermitian { h_spec(&p)? } else { j_spec(&p)? };
        let grid = polar_grid(n, 0.9, 9);
        let bound = kernel_image_bound(&spec)
            .map_err(err)?
            .ok_or("bound denominator not positive")?;
        if n < 3 {
            let probe = norm_probe(&spec, &ladder, &grid, battery.exec).map_err(err)?;
            monotone &= probe.nondecreasing;
            worst_variation = worst_variation.max(probe.last_rung_variation);
            violations += probe.violations;
            samples += probe.samples;
            worst_ratio = worst_ratio.max(probe.max_kernel_image_norm / bound);
        } else {
            // the ladder at three variables is too large for a quick battery
            let norms = map_collect(battery.exec, &grid, |w| kernel_image_norm(&spec, w));
            for v in norms {
                let v = v.map_err(err)?;
                samples += 1;
                worst_ratio = worst_ratio.max(v / bound);
                if v > bound {
                    violations += 1;
                }
            }
        }
    }
    Ok((
        violations == 0 && monotone && worst_variation < variation_tol,
        format!(
            "{samples} kernel samples, {violations} above the bound (max ratio {worst_ratio:.3}); ladder 4..12 nondecreasing: {monotone}, last-rung variation {worst_variation:.2e} (limit {variation_tol})"
        ),
    ))
}

fn classification(battery: &Battery) -> Check {
    let tol = 1e-12 * battery.tol_scale;
    let mut rng = rng(battery, 9);
    let draws = 50;
    let mut worst = 0.0f64;
    let mut wrong_form = 0;
    for i in 0..draws {
        let hermitian = i % 2 == 1;
        let p = draw(&mut rng, 1 + i % 3, hermitian, 0.9, 1.0, 1.0);
        let spec = if hermitian { h_spec(&p)? } else { j_spec(&p)? };
        let caps = Caps::new(p.k.components().iter().map(|k| k + 4).collect());
        let u = spec.weight_series(caps.clone()).map_err(err)?;
        let v: Vec<_> = spec
            .maps()
            .iter()
            .zip(caps.as_slice())
            .map(|(m, &cap)| m.expand(cap))
            .collect();
        let got = classify(&u, &v, &p.k, crate::defaults::CLASSIFY_TOL).map_err(err)?;
        let (cand, expected) = if hermitian {
            (&got.hermitian, [SymbolForm::Hermitian, SymbolForm::Both])
        } else {
            (&got.j_symmetric, [SymbolForm::JSymmetric, SymbolForm::Both])
        };
        if !expected.contains(&got.form) {
            wrong_form += 1;
        }
        let mut dev = (cand.a - p.a).norm();
        for j in 0..p.k.arity() {
            dev = dev
                .max((cand.c[j] - p.c[j]).norm())
                .max((cand.d[j] - p.d[j]).norm());
        }
        worst = worst.max(dev);
    }
    Ok((
        worst <= tol && wrong_form == 0,
        format!("{draws} draws, max parameter error {worst:.2e} (limit {tol:.0e}), {wrong_form} wrong forms"),
    ))
}
