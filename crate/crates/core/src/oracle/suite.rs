//! The verification suite: every closed-form constant against an
//! independent computation, each check at its stated tolerance.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::divergence::central_divergence;
use super::eigen::{box_eigenvalue_exact, box_eigenvalue_fd};
use super::quadrature::{pairwise_sum, piecewise_simpson, tensor_sum, Rule1d};
use super::{observed_order, BoxDomain, GridSpec};
use crate::forces::{
    admissible_amplitude_alternative, force_certificate, q_norm_bounds, Axis, CutoffProfile,
    ExtensionField,
};
use crate::geometry::{Branch, ChannelGeometry};
use crate::inflow::{
    cosine_profile, inflow_norms, InflowDatum, SampledInflow, DEFAULT_COMPAT_TOL,
};
use crate::sobolev::{gn_constant, l6_coeff_vstar, poincare_coeff_v, poincare_coeff_vstar, EmbeddingBounds};
use crate::wellposedness::{
    certify, contraction_beta, threshold_explicit, threshold_general, FluidParams,
    GradBoundChoice, Status, WARN_PHI_FACTOR_L,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Smaller sample counts and grids, for smoke tests. Tolerances are unchanged.
    pub quick: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 20240917, quick: false }
    }
}

impl SuiteOptions {
    fn pick<T>(&self, full: T, quick: T) -> T {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub observed: String,
    pub expected: String,
    pub seconds: f64,
}

impl fmt::Display for SuiteRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<3} {}: observed {}; expected {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.observed,
            self.expected,
            self.seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub quick: bool,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

fn row(
    id: &'static str,
    title: &'static str,
    start: Instant,
    passed: bool,
    observed: String,
    expected: impl Into<String>,
) -> SuiteRow {
    SuiteRow {
        id,
        title,
        passed,
        observed,
        expected: expected.into(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

/// A valid geometry drawn over the whole admissible range, with `L` in `[0.5, 3]`.
pub fn random_geometry(rng: &mut impl Rng) -> ChannelGeometry {
    let l = rng.gen_range(0.5..3.0);
    let a = l * rng.gen_range(0.05..0.98);
    let b = a * rng.gen_range(0.05..=1.0);
    let c = b * rng.gen_range(0.05..=1.0);
    let vol = 8.0 * a * b * c * rng.gen_range(1e-3..=1.0);
    ChannelGeometry::new(l, a, b, c, vol).expect("sampler stays inside the valid region")
}

/// A valid geometry with `L = 1`, the unit-free form used for norm comparisons.
fn random_unit_geometry(rng: &mut impl Rng) -> ChannelGeometry {
    let a = rng.gen_range(0.1..0.95);
    let b = a * rng.gen_range(0.3..=1.0);
    let c = b * rng.gen_range(0.3..=1.0);
    let vol = 8.0 * a * b * c * rng.gen_range(0.05..=1.0);
    ChannelGeometry::new(1.0, a, b, c, vol).expect("sampler stays inside the valid region")
}

pub fn criterion_1_gn_endpoint() -> SuiteRow {
    let t = Instant::now();
    let lhs = 2f64.cbrt() * gn_constant(6.0).expect("p = 6 is admissible").value;
    let rhs = l6_coeff_vstar();
    let err = (lhs - rhs).abs();
    row(
        "1",
        "GN endpoint identity 2^(1/3) C(6) = 2/(sqrt3 pi^(2/3))",
        t,
        err <= 1e-12,
        format!("|difference| = {err:.3e}"),
        "<= 1e-12",
    )
}

pub fn criterion_2_break_even() -> SuiteRow {
    let t = Instant::now();
    let l = 1.0;
    let be = ChannelGeometry::break_even_volume(l);
    let g = ChannelGeometry::new(l, 0.9, 0.9, 0.9, be).expect("valid");
    let cube_root = (3.0 * g.fluid_volume() / (2.0 * PI)).cbrt();
    let gap = (cube_root - 4.0 * l / 3.0).abs();
    let ratio_err = (g.channel_volume() / g.fluid_volume() - 81.0 / (16.0 * PI)).abs();

    let vmax = 8.0 * 0.9f64.powi(3);
    let n = 1000;
    let mut flips = 0;
    let mut misplaced = 0;
    let mut prev: Option<Branch> = None;
    let mut max_jump: f64 = 0.0;
    let mut prev_m: Option<f64> = None;
    for k in 1..=n {
        let v = vmax * k as f64 / n as f64;
        let mb = ChannelGeometry::new(l, 0.9, 0.9, 0.9, v).expect("valid").min_branch();
        let expect = if v >= be { Branch::CubeRoot } else { Branch::Box };
        if mb.branch != expect {
            misplaced += 1;
        }
        if let Some(p) = prev {
            if p != mb.branch {
                flips += 1;
            }
        }
        if let Some(pm) = prev_m {
            max_jump = max_jump.max((mb.m - pm).abs());
        }
        prev = Some(mb.branch);
        prev_m = Some(mb.m);
    }
    let passed = gap <= 1e-10 && flips == 1 && misplaced == 0;
    row(
        "2",
        "break-even continuity of the Poincare minimum",
        t,
        passed,
        format!(
            "branch gap {gap:.3e} (ratio error {ratio_err:.1e}); {flips} flip(s), {misplaced} misplaced over {n} volumes; max step in m {max_jump:.2e}"
        ),
        "gap <= 1e-10, exactly one Box -> CubeRoot flip",
    )
}

pub fn criterion_3_poincare(opts: &SuiteOptions) -> (SuiteRow, SuiteRow) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 3);
    let n = opts.pick(10_000, 1_000);
    let (mut bad_star, mut bad_v) = (0usize, 0usize);
    let (mut worst_star, mut worst_v) = (0f64, 0f64);
    let mut v_errors = 0;
    for _ in 0..n {
        let g = random_geometry(&mut rng);
        let l = g.half_width();
        let ks = poincare_coeff_vstar(&g) / l;
        worst_star = worst_star.max(ks);
        if ks > 0.43 {
            bad_star += 1;
        }
        match poincare_coeff_v(&g) {
            Ok(k) => {
                worst_v = worst_v.max(k / l);
                if k / l > 0.46 {
                    bad_v += 1;
                }
            }
            Err(_) => v_errors += 1,
        }
    }
    let star = row(
        "3a",
        "Poincare coefficient on V*: kappa* <= 0.43 L",
        t,
        bad_star == 0,
        format!("max kappa*/L = {worst_star:.6}; {bad_star} of {n} violate"),
        "0 violations",
    );
    let t = Instant::now();
    let v = row(
        "3b",
        "Poincare coefficient on V: kappa <= 0.46 L",
        t,
        bad_v == 0 && v_errors == 0,
        format!("max kappa/L = {worst_v:.6}; {bad_v} of {n} violate; {v_errors} domain errors"),
        "0 violations",
    );
    (star, v)
}

pub fn criterion_4_threshold_identity(opts: &SuiteOptions) -> SuiteRow {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 4);
    let n = 1000;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let g = random_geometry(&mut rng);
        let eta = 10f64.powf(rng.gen_range(-2.0..2.0));
        let eb = EmbeddingBounds::compute(&g).expect("valid geometry");
        let e = threshold_explicit(&g, eta);
        let gen = threshold_general(eb.s3_lb, eb.j6_lb, eta);
        worst = worst.max(rel(e, gen));
    }
    row(
        "4",
        "explicit threshold equals the general threshold at the embedding bounds",
        t,
        worst <= 1e-12,
        format!("max relative difference {worst:.3e} over {n} draws"),
        "<= 1e-12",
    )
}

pub fn criterion_5_contraction(opts: &SuiteOptions) -> SuiteRow {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 5);
    let n = opts.pick(10_000, 1_000);
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    let mut uncertified = 0;
    for k in 0..n {
        let g = random_geometry(&mut rng);
        let eta = 10f64.powf(rng.gen_range(-2.0..2.0));
        let f = FluidParams::new(eta).expect("positive");
        let unit = certify(&g, &f, &InflowDatum::analytic(1.0).expect("valid"), DEFAULT_COMPAT_TOL)
            .expect("valid inputs");
        // include the threshold edge itself
        let u = if k % 100 == 0 { 1.0 } else { rng.gen_range(0.0..=1.0) };
        let amp = u * unit.threshold / unit.phi;
        let c = certify(&g, &f, &InflowDatum::analytic(amp).expect("valid"), DEFAULT_COMPAT_TOL)
            .expect("valid inputs");
        if c.status != Status::Certified {
            uncertified += 1;
            continue;
        }
        let eb = &c.embedding;
        let beta = contraction_beta(c.phi, eb.s3_lb, eb.s6_lb, eb.j6_lb, eta);
        worst = worst.max(beta);
        if !(beta < 1.0) {
            bad += 1;
        }
    }
    row(
        "5",
        "contraction factor below one on certified instances",
        t,
        bad == 0,
        format!("max beta = {worst:.6}; {bad} violations; {} certified of {n} draws", n - uncertified),
        "beta < 1 always",
    )
}

pub fn criterion_6_eigenvalues(opts: &SuiteOptions) -> SuiteRow {
    let t = Instant::now();
    let (n_coarse, n_fine) = opts.pick((32, 64), (8, 16));
    let qp = BoxDomain::doubled_channel(1.0).expect("valid");
    let exact_qp = 9.0 * PI * PI / 16.0;
    debug_assert!(rel(box_eigenvalue_exact(&qp), exact_qp) < 1e-15);
    let cube = BoxDomain::new([0.0; 3], [PI; 3]).expect("valid");
    let run = |d: &BoxDomain, n| box_eigenvalue_fd(d, &GridSpec::uniform(n).expect("n >= 3"), 1e-10);
    let result = (|| -> crate::error::Result<SuiteRow> {
        let coarse = run(&qp, n_coarse)?;
        let fine = run(&qp, n_fine)?;
        let c = run(&cube, n_fine)?;
        let (e_c, e_f) = ((coarse.lambda - exact_qp).abs(), (fine.lambda - exact_qp).abs());
        let order = observed_order(e_c, e_f, coarse.h, fine.h);
        let rq = rel(fine.lambda, exact_qp);
        let rc = rel(c.lambda, 3.0);
        Ok(row(
            "6",
            "finite-difference Dirichlet eigenvalues of Q+ and (0, pi)^3",
            t,
            rq <= 0.01 && rc <= 0.01 && order >= 1.8,
            format!(
                "Q+: lambda({n_fine}) = {:.8} vs 9pi^2/16 = {exact_qp:.8} (rel {rq:.2e}), order {order:.3} from n = {n_coarse}; (0,pi)^3: {:.8} (rel {rc:.2e})",
                fine.lambda, c.lambda
            ),
            "within 1%, order >= 1.8",
        ))
    })();
    result.unwrap_or_else(|e| row("6", "finite-difference Dirichlet eigenvalues", t, false, e.to_string(), "convergence"))
}

/// Largest `|phi'|` and `|phi''|` over a sampling of step at most `step` that
/// contains every breakpoint.
pub fn sampled_cutoff_sups(eps: f64, step: f64) -> (f64, f64) {
    let p = CutoffProfile::new(eps).expect("positive eps");
    let b = [-1.5 - eps, -1.0 - eps, -1.0, 1.0, 1.0 + eps, 1.5 + eps];
    let (mut s1, mut s2) = (0f64, 0f64);
    for w in b.windows(2) {
        let n = ((w[1] - w[0]) / step).ceil() as usize;
        for k in 0..=n {
            let tt = if k == n { w[1] } else { w[0] + (w[1] - w[0]) * k as f64 / n as f64 };
            let v = p.eval(tt);
            s1 = s1.max(v.d1.abs());
            s2 = s2.max(v.d2.abs());
        }
    }
    (s1, s2)
}

pub fn criterion_7_cutoff() -> SuiteRow {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut obs = Vec::new();
    for eps in [0.1, 0.5, 1.0] {
        let (s1, s2) = sampled_cutoff_sups(eps, 1e-6);
        let (r1, r2) = (rel(s1, 1.5 / eps), rel(s2, 6.0 / (eps * eps)));
        worst = worst.max(r1).max(r2);
        obs.push(format!("eps {eps}: {s1:.9}, {s2:.9}"));
    }
    row(
        "7",
        "cutoff sup-norms 3/(2 eps) and 6/eps^2 by dense sampling",
        t,
        worst <= 1e-6,
        format!("{}; max relative error {worst:.2e}", obs.join("; ")),
        "<= 1e-6 relative",
    )
}

/// `||q||_{L^3(Omega)}` and `||grad q||_{L^2(Omega)}` by tensor Simpson on
/// each of the 27 sub-boxes cut out of the support by the kink planes of `q`.
/// `grad q` jumps across those planes, so each sub-box is integrated on its
/// own, shrunk by a relative `1e-12` so that every node sees one smooth piece.
/// Inside the box `P` the field is the unit vector; the `L^3` integral over
/// `P` is therefore `8abc` and only `|K|` has to be removed.
pub fn q_norms_quadrature(field: &ExtensionField, obstacle_volume: f64, nodes_per_piece: usize) -> (f64, f64) {
    let h = field.half_extents();
    let s = field.support_half_extents();
    let rules: Vec<Vec<Rule1d>> = (0..3)
        .map(|d| {
            [(-s[d], -h[d]), (-h[d], h[d]), (h[d], s[d])]
                .iter()
                .map(|&(lo, hi)| {
                    let shrink = 1e-12 * (hi - lo);
                    piecewise_simpson(&[lo + shrink, hi - shrink], nodes_per_piece).expect("odd node count")
                })
                .collect()
        })
        .collect();
    let integrand = |p: [f64; 3]| {
        let (q, j) = field.eval_with_jacobian(p);
        let m2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
        let g2: f64 = j.iter().flatten().map(|v| v * v).sum();
        [m2 * m2.sqrt(), g2]
    };
    let mut parts = [Vec::with_capacity(27), Vec::with_capacity(27)];
    for rx in &rules[0] {
        for ry in &rules[1] {
            for rz in &rules[2] {
                let [c, g] = tensor_sum([rx, ry, rz], integrand);
                parts[0].push(c);
                parts[1].push(g);
            }
        }
    }
    let (cube, grad) = (pairwise_sum(&parts[0]), pairwise_sum(&parts[1]));
    ((cube - obstacle_volume).max(0.0).cbrt(), grad.max(0.0).sqrt())
}

pub fn criterion_8_q_fields(opts: &SuiteOptions) -> (SuiteRow, SuiteRow, SuiteRow) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 8);

    // exact boundary values
    let t = Instant::now();
    let n_pts = 1000;
    let mut wrong = 0;
    for _ in 0..n_pts {
        let g = random_geometry(&mut rng);
        let (l, a, b, c) = (g.half_width(), g.a(), g.b(), g.c());
        for axis in [Axis::E1, Axis::E3] {
            let q = ExtensionField::standard(&g, axis);
            let mut p = [rng.gen_range(-a..=a), rng.gen_range(-b..=b), rng.gen_range(-c..=c)];
            // put a third of the points on a face of P
            let face = rng.gen_range(0..9);
            if face < 3 {
                p[face] = [a, b, c][face] * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            }
            if q.eval(p) != axis.unit() {
                wrong += 1;
            }
            let sh = q.support_half_extents();
            let d = rng.gen_range(0..3);
            let mut o = [rng.gen_range(-l..l), rng.gen_range(-l..l), rng.gen_range(-l..l)];
            o[d] = rng.gen_range(sh[d]..l).max(sh[d] * (1.0 + 1e-12)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            if q.eval(o) != [0.0; 3] {
                wrong += 1;
            }
        }
    }
    let exact = row(
        "8a",
        "q_i = e_i on the closed box and 0 outside the support",
        t,
        wrong == 0,
        format!("{wrong} mismatches over {} evaluations", 4 * n_pts),
        "0 mismatches (exact)",
    );

    // divergence residual
    let t = Instant::now();
    let g = ChannelGeometry::new(1.0, 0.6, 0.4, 0.3, 0.2).expect("valid");
    let steps = [1e-3, 5e-4, 2.5e-4];
    let margin = 4.0 * steps[0];
    let mut residual = [0f64; 3];
    let mut jac_residual: f64 = 0.0;
    let mut used = 0;
    for axis in [Axis::E1, Axis::E3] {
        let q = ExtensionField::standard(&g, axis);
        let (h, s) = (q.half_extents(), q.support_half_extents());
        while used < 1000 * if axis == Axis::E1 { 1 } else { 2 } {
            let p = [0, 1, 2].map(|d| rng.gen_range(-s[d]..s[d]));
            let near_kink = (0..3).any(|d| {
                let x = p[d].abs();
                (x - h[d]).abs() < margin || (x - s[d]).abs() < margin
            });
            let inside = (0..3).all(|d| p[d].abs() < h[d]);
            if near_kink || inside {
                continue;
            }
            used += 1;
            let f = |x: [f64; 3]| q.eval(x);
            for (k, &st) in steps.iter().enumerate() {
                residual[k] = residual[k].max(central_divergence(&f, p, st).abs());
            }
            let (_, j) = q.eval_with_jacobian(p);
            jac_residual = jac_residual.max((j[0][0] + j[1][1] + j[2][2]).abs());
        }
    }
    let o1 = observed_order(residual[0], residual[1], steps[0], steps[1]);
    let o2 = observed_order(residual[1], residual[2], steps[1], steps[2]);
    let div = row(
        "8b",
        "finite-difference divergence of q_i vanishes at second order",
        t,
        o1 >= 1.8 && o2 >= 1.8 && jac_residual <= 1e-10,
        format!(
            "max residual {:.3e}, {:.3e}, {:.3e} at steps 1e-3, 5e-4, 2.5e-4 ({used} points off the kink planes); orders {o1:.3}, {o2:.3}; analytic trace {jac_residual:.1e}",
            residual[0], residual[1], residual[2]
        ),
        "order >= 1.8",
    );

    // domination by the closed-form bounds
    let t = Instant::now();
    let n_geom = opts.pick(50, 5);
    let npp = opts.pick(43, 15);
    let mut violations = [0usize; 4];
    let mut worst = [0f64; 4];
    let mut first_bad = None;
    for _ in 0..n_geom {
        let g = random_unit_geometry(&mut rng);
        let b = q_norm_bounds(&g);
        let (l3_1, h1_1) = q_norms_quadrature(&ExtensionField::standard(&g, Axis::E1), g.obstacle_volume(), npp);
        let (l3_3, h1_3) = q_norms_quadrature(&ExtensionField::standard(&g, Axis::E3), g.obstacle_volume(), npp);
        let ratios = [l3_1 / b.q1_l3, l3_3 / b.q3_l3, h1_1 / b.q1_h1, h1_3 / b.q3_h1];
        for k in 0..4 {
            worst[k] = worst[k].max(ratios[k]);
            if ratios[k] > 1.0 {
                violations[k] += 1;
                first_bad.get_or_insert((g, k, ratios[k]));
            }
        }
    }
    let total: usize = violations.iter().sum();
    let mut observed = format!(
        "violations (q1 L3, q3 L3, q1 H1, q3 H1) = {violations:?} over {n_geom} geometries; max numeric/bound = [{:.3}, {:.3}, {:.3}, {:.3}]",
        worst[0], worst[1], worst[2], worst[3]
    );
    if let Some((g, k, r)) = first_bad {
        observed += &format!(
            "; e.g. a = {:.4}, b = {:.4}, c = {:.4}: norm {k} at {r:.3} x bound",
            g.a(),
            g.b(),
            g.c()
        );
    }
    let dom = row(
        "8c",
        "quadrature norms of q_i bounded by the closed-form bounds",
        t,
        total == 0,
        observed,
        "numeric <= bound for every geometry",
    );
    (exact, div, dom)
}

pub fn criterion_9_inflow(opts: &SuiteOptions) -> SuiteRow {
    let t = Instant::now();
    let (l, amp) = (1.3, 0.7);
    let g = ChannelGeometry::new(l, 0.5, 0.5, 0.5, 0.5).expect("valid");
    let err = |n: usize| {
        let s = SampledInflow::from_fn(n, n, l, cosine_profile(amp, l)).expect("odd grid");
        let m = inflow_norms(&InflowDatum::Sampled(s), &g).expect("valid grid");
        [rel(m.l2, amp * l), rel(m.grad_l2, amp * PI / SQRT_2), m.div_l2]
    };
    let (e65, e129, e257) = (err(65), err(129), err(opts.pick(257, 257)));
    // the L^2 integrand is periodic and Simpson reproduces it to rounding; the
    // derivative stencils carry the discretization error
    let h_ratio = 128.0 / 64.0;
    let order = observed_order(e65[1], e129[1], h_ratio, 1.0);
    let agree = e257[0].max(e257[1]);
    row(
        "9",
        "sampled inflow norms converge to (AL, A pi/sqrt2, 0)",
        t,
        order >= 3.5 && agree <= 1e-8 && e257[2] == 0.0,
        format!(
            "gradient-norm errors {:.3e} (n=65), {:.3e} (n=129), order {order:.3}; L2 errors {:.1e}, {:.1e}; n=257 max relative error {agree:.2e}, div {:.1e}",
            e65[1], e129[1], e65[0], e129[0], e257[2]
        ),
        "order >= 3.5, agreement 1e-8 at n = 257",
    )
}

pub fn criterion_10_end_to_end(opts: &SuiteOptions) -> SuiteRow {
    let t = Instant::now();
    let g = ChannelGeometry::new(1.0, 0.8, 0.8, 0.8, 3.1).expect("valid");
    let f = FluidParams::new(1.0).expect("positive");
    let result = (|| -> crate::error::Result<SuiteRow> {
        let amax = admissible_amplitude_alternative(&g, 1.0)?;
        let n = opts.pick(1001, 101);
        let mut flips = 0;
        let mut prev = None;
        let mut bad_forces = 0;
        let mut certified = 0;
        let mut psi_at_half = f64::NAN;
        for k in 0..n {
            let amp = 2.0 * amax * k as f64 / (n - 1) as f64;
            let r = force_certificate(&g, &f, amp, GradBoundChoice::Rough)?;
            let st = r.certificate.status;
            if prev.is_some_and(|p| p != st) {
                flips += 1;
            }
            prev = Some(st);
            if st == Status::Certified {
                certified += 1;
                let b = &r.bounds;
                let ok = b.psi.is_finite()
                    && b.drag_bound == b.psi
                    && b.lift_bound == b.psi
                    && (amp == 0.0 || b.psi > 0.0);
                if !ok {
                    bad_forces += 1;
                }
                if 2 * k == n - 1 {
                    psi_at_half = b.psi;
                }
            }
        }
        let starts_certified = certify(&g, &f, &InflowDatum::analytic(0.0)?, DEFAULT_COMPAT_TOL)?.is_certified();
        Ok(row(
            "10",
            "end-to-end certificate and drag/lift at the seed geometry",
            t,
            flips == 1 && bad_forces == 0 && starts_certified,
            format!(
                "{flips} status flip(s) over {n} amplitudes in [0, 2 A_max] (A_max = {amax:.6e}); {certified} certified, {bad_forces} with bad force bounds; Psi(A_max) = {psi_at_half:.6e}"
            ),
            "exactly one Certified -> NotCertified flip; drag = lift = Psi > 0",
        ))
    })();
    result.unwrap_or_else(|e| row("10", "end-to-end certificate", t, false, e.to_string(), "no error"))
}

pub fn criterion_11_phi_warning(opts: &SuiteOptions) -> SuiteRow {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 11);
    let n = 200;
    let mut missing = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let g = random_geometry(&mut rng);
        let f = FluidParams::new(10f64.powf(rng.gen_range(-1.0..1.0))).expect("positive");
        let amp = 10f64.powf(rng.gen_range(-6.0..1.0));
        let c = certify(&g, &f, &InflowDatum::analytic(amp).expect("valid"), DEFAULT_COMPAT_TOL)
            .expect("valid inputs");
        let w = c.warnings.iter().find(|w| w.code == WARN_PHI_FACTOR_L);
        match (w, c.phi_alternative) {
            (Some(w), Some(alt)) if w.message.contains(&format!("{:e}", c.phi)) && w.message.contains(&format!("{alt:e}")) => {
                worst = worst.max(rel(alt * g.half_width(), c.phi));
            }
            _ => missing += 1,
        }
    }
    row(
        "11",
        "analytic-inflow certificates report both forms of Phi",
        t,
        missing == 0 && worst <= 1e-12,
        format!("{missing} of {n} certificates without the warning; max |L Phi_alt - Phi| / Phi = {worst:.1e}"),
        "warning on every certificate; values differ by exactly L",
    )
}

pub fn run_suite(opts: &SuiteOptions, mut on_row: impl FnMut(&SuiteRow)) -> SuiteReport {
    let mut rows = Vec::new();
    let mut push = |r: SuiteRow| {
        on_row(&r);
        rows.push(r);
    };
    push(criterion_1_gn_endpoint());
    push(criterion_2_break_even());
    let (a, b) = criterion_3_poincare(opts);
    push(a);
    push(b);
    push(criterion_4_threshold_identity(opts));
    push(criterion_5_contraction(opts));
    push(criterion_6_eigenvalues(opts));
    push(criterion_7_cutoff());
    let (a, b, c) = criterion_8_q_fields(opts);
    push(a);
    push(b);
    push(c);
    push(criterion_9_inflow(opts));
    push(criterion_10_end_to_end(opts));
    push(criterion_11_phi_warning(opts));
    SuiteReport { quick: opts.quick, rows }
}
