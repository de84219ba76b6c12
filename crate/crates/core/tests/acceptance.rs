//! Acceptance suite: one PASS/FAIL line per criterion, then a summary.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zsnft::experiments::{fine_grid_oracle, refine_eigenvalue, DEFAULT_ORACLE_M};
use zsnft::fastlayer::{fast_scatter, step_polynomial, MobiusMap, Targets};
use zsnft::metrics::{argmax, loglog_slope, relative_error, rmse};
use zsnft::pauli::{apply_even_odd, matexp, Mat2};
use zsnft::propagator::{linspace, phase_coefficient, scatter, scatter_grid, Prepared, ScatteringData};
use zsnft::schemes::{coeffs_mu, transition, SchemeKind};
use zsnft::signals::{generate, SignalKind, SignalSpec};
use zsnft::zbuilder::{build_z_cayley, build_z_exponential, GenericZTerms, KCoeffs, NodeData};

const N_XI: usize = 1025;
const M_REF: usize = 1 << 16;

struct Report {
    passed: usize,
    total: usize,
}

impl Report {
    fn line(&mut self, id: &str, pass: bool, detail: String) {
        self.total += 1;
        self.passed += pass as usize;
        println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn chirped(m: usize, sigma: f64) -> SignalSpec {
    SignalSpec { m, sigma, ..SignalSpec::default() }
}

fn sech(amplitude: f64, m: usize) -> SignalSpec {
    SignalSpec { kind: SignalKind::Sech, amplitude, chirp: 0.0, l: 32.0, m, sigma: 1.0, path: None }
}

fn conventional(spec: &SignalSpec, kind: SchemeKind, xi: &[f64]) -> ScatteringData {
    scatter_grid(&Prepared::new(&generate(spec).unwrap(), kind).unwrap(), xi).unwrap()
}

fn fast(spec: &SignalSpec, kind: SchemeKind, h: f64, xi: &[f64]) -> ScatteringData {
    let map = MobiusMap::new(h).unwrap();
    fast_scatter(&generate(spec).unwrap(), kind, &map, &Targets::Points(xi.to_vec())).unwrap()
}

fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| relative_error(*x, *y)).fold(0.0, f64::max)
}

fn rel_mat(a: &Mat2, b: &Mat2) -> f64 {
    (*a - *b).norm() / b.norm()
}

fn ms(xs: &[usize]) -> Vec<f64> {
    xs.iter().map(|&m| m as f64).collect()
}

fn convergence(r: &mut Report, xi: &[f64], reference: &ScatteringData) {
    let m_list = [1 << 10, 1 << 11, 1 << 12, 1 << 13];
    let cases = [
        (SchemeKind::Es6, -6.5, -5.5),
        (SchemeKind::Es6Pade3, -6.5, -5.5),
        (SchemeKind::Es6Pade4, -6.5, -5.5),
        (SchemeKind::Es6Cayley, -6.5, -5.5),
        (SchemeKind::Bo2, -2.5, -1.5),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, lo, hi) in cases {
        let errs: Vec<f64> =
            m_list.iter().map(|&m| rmse(&conventional(&chirped(m, 1.0), kind, xi).b, &reference.b)).collect();
        let slope = loglog_slope(&ms(&m_list), &errs);
        ok &= (lo..=hi).contains(&slope);
        parts.push(format!("{kind} {slope:.3}"));
    }
    r.line("criterion 1 (RMSE[b] order slopes)", ok, parts.join(", "));
}

fn invariant(r: &mut Report, xi: &[f64]) {
    let mut worst: f64 = 0.0;
    for kind in SchemeKind::SIXTH_ORDER {
        let d = conventional(&chirped(1 << 12, 1.0), kind, xi);
        worst = worst.max(d.h.iter().map(|h| (h - 1.0).abs()).fold(0.0, f64::max));
    }
    r.line(
        "criterion 2a (sigma=+1 invariant, M=2^12)",
        worst <= 1e-10,
        format!("max |H-1| = {worst:.2e} (bound 1e-10)"),
    );

    let mut outer: f64 = 0.0;
    let mut centred = true;
    let mut peaks = Vec::new();
    for kind in SchemeKind::SIXTH_ORDER {
        let d = conventional(&chirped(1 << 12, -1.0), kind, xi);
        let errs: Vec<f64> = d.h.iter().map(|h| (h - 1.0).abs()).collect();
        let third = (xi[xi.len() - 1] - xi[0]) / 6.0;
        outer = outer.max(xi.iter().zip(&errs).filter(|(x, _)| x.abs() > third).map(|(_, e)| *e).fold(0.0, f64::max));
        let peak = xi[argmax(&errs).unwrap()];
        centred &= peak.abs() <= third;
        peaks.push(format!("{kind} {peak:.2}"));
    }
    r.line(
        "criterion 2b (sigma=-1 invariant, M=2^12)",
        outer <= 1e-10 && centred,
        format!("outside middle third max |H-1| = {outer:.2e}; argmax xi: {}", peaks.join(", ")),
    );
}

fn pade_consistency(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = Mat2::traceless(
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    );
    let taus = [0.4, 0.2, 0.1, 0.05];
    let errs: Vec<f64> = taus
        .iter()
        .map(|&t| {
            let z = base.scale_re(t);
            let e3 = apply_even_odd(&z, coeffs_mu(SchemeKind::Es6Pade3, z.lambda_sq()).unwrap());
            (e3 - matexp(&z)).norm()
        })
        .collect();
    let slope = -loglog_slope(&taus.iter().map(|t| 1.0 / t).collect::<Vec<_>>(), &errs);
    r.line(
        "criterion 3a (single-step E3 vs exp)",
        slope >= 6.5,
        format!("tau-halving slope {slope:.3} (bound >= 6.5), errors {}", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(" ")),
    );

    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let mut q = [Complex64::default(); 5];
        let mut rr = [Complex64::default(); 5];
        for k in 0..5 {
            let s = 0.5f64.powi(k as i32);
            q[k] = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)) * s;
            rr[k] = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)) * s;
        }
        let node = NodeData::general(q, rr);
        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..0.5));
        worst = worst
            .max(rel_mat(&build_z_exponential(&node).eval(z), &GenericZTerms::assemble(&node, &KCoeffs::PADE3, z).total()))
            .max(rel_mat(&build_z_cayley(&node).eval(z), &GenericZTerms::assemble(&node, &KCoeffs::CAYLEY, z).total()));
    }
    r.line(
        "criterion 3b (closed-form Z vs generic expansion)",
        worst <= 1e-12,
        format!("max relative deviation {worst:.2e} over 500 random nodes (bound 1e-12)"),
    );
}

fn derivative(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let grid = generate(&chirped(1 << 10, 1.0)).unwrap();
    let delta = 1e-5;
    let mut worst: f64 = 0.0;
    for kind in SchemeKind::ALL {
        let prep = Prepared::new(&grid, kind).unwrap();
        for k in 0..20 {
            let im = if k < 8 { 0.0 } else { rng.gen_range(0.05..1.0) };
            let zeta = c(rng.gen_range(-15.0..15.0), im);
            let exact = scatter(&prep, zeta, true).unwrap().a_prime.unwrap();
            let d = c(delta, 0.0);
            let fd = (scatter(&prep, zeta + d, false).unwrap().a - scatter(&prep, zeta - d, false).unwrap().a)
                / (2.0 * delta);
            worst = worst.max((exact - fd).norm() / exact.norm());
        }
    }
    r.line(
        "criterion 4 (a' recursion vs central difference)",
        worst <= 1e-7,
        format!("max relative deviation {worst:.2e} at 20 probes per scheme (bound 1e-7)"),
    );
}

fn fast_identity(r: &mut Report, xi: &[f64], reference: &ScatteringData) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid = generate(&chirped(1 << 10, 1.0)).unwrap();
    let tau = grid.tau();
    let mut parts = Vec::new();
    let mut ok = true;
    for (kind, h) in [(SchemeKind::Es6Pade3, 11.0), (SchemeKind::Es6Pade4, 15.0), (SchemeKind::Cn2, 2.0)] {
        let map = MobiusMap::new(h).unwrap();
        let prep = Prepared::new(&grid, kind).unwrap();
        let mut worst: f64 = 0.0;
        let mut worst_theta = 0.0;
        for _ in 0..64 {
            let n = rng.gen_range(0..prep.zpolys().len());
            let theta: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let w = Complex64::from_polar(1.0, theta);
            let zp = &prep.zpolys()[n];
            let via_poly = step_polynomial(zp, kind, &map).unwrap().eval(w).unwrap();
            let direct = transition(kind, zp, map.z(w) / tau, tau).unwrap();
            let e = rel_mat(&via_poly, &direct);
            if e > worst {
                worst = e;
                worst_theta = theta;
            }
        }
        ok &= worst <= 1e-11;
        parts.push(format!("{kind} {worst:.2e} (at theta {worst_theta:.2})"));
    }
    r.line("criterion 5a (per-step polynomial identity, 64 circle points)", ok, parts.join(", "));

    let probes = linspace(-20.0, 20.0, 16);
    let spec = chirped(1 << 10, 1.0);
    let f = fast(&spec, SchemeKind::Es6Pade3, 11.0, &probes);
    let conv = conventional(&spec, SchemeKind::Es6Pade3, &probes);
    let errs: Vec<f64> = f.a.iter().zip(&conv.a).map(|(x, y)| relative_error(*x, *y)).collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    let inner = probes.iter().zip(&errs).filter(|(x, _)| x.abs() < 10.0).map(|(_, e)| *e).fold(0.0, f64::max);
    r.line(
        "criterion 5b (FES6_Pade3 vs ES6_Pade3 a(xi), M=2^10, 16 probes)",
        worst <= 1e-6,
        format!("max relative deviation {worst:.2e} (|xi| < 10: {inner:.2e}; bound 1e-6)"),
    );

    let spec = chirped(1 << 12, 1.0);
    let f = fast(&spec, SchemeKind::Es6Pade3, 11.0, xi);
    let conv = conventional(&spec, SchemeKind::Es6Pade3, xi);
    let (ef, ec) = (rmse(&f.a, &reference.a), rmse(&conv.a, &reference.a));
    r.line(
        "criterion 5c (FES6_Pade3 accuracy at M=2^12)",
        ef <= 10.0 * ec,
        format!(
            "RMSE[a] fast {ef:.3e} vs conventional {ec:.3e}; max fast/conventional deviation {:.2e}",
            max_rel(&f.a, &conv.a)
        ),
    );
}

fn crossover(r: &mut Report) {
    let m_list = [1 << 9, 1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14];
    let map = MobiusMap::new(11.0).unwrap();
    let mut t_fast = Vec::new();
    let mut t_conv = Vec::new();
    let mut crossover = None;
    let mut rows = Vec::new();
    for &m in &m_list {
        let grid = generate(&chirped(m, 1.0)).unwrap();
        let start = Instant::now();
        let targets = Targets::window(-20.0, 20.0, m, grid.tau(), &map);
        let f = fast_scatter(&grid, SchemeKind::Es6Pade3, &map, &targets).unwrap();
        let tf = start.elapsed().as_secs_f64();
        let start = Instant::now();
        scatter_grid(&Prepared::new(&grid, SchemeKind::Es6Pade3).unwrap(), &f.xi).unwrap();
        let tc = start.elapsed().as_secs_f64();
        if tf < tc && crossover.is_none() {
            crossover = Some(m);
        } else if tf >= tc {
            crossover = None;
        }
        rows.push(format!("M={m} N={} fast {tf:.3}s conventional {tc:.3}s", f.len()));
        t_fast.push(tf);
        t_conv.push(tc);
    }
    let tail = 3;
    let x = ms(&m_list[m_list.len() - tail..]);
    let sf = loglog_slope(&x, &t_fast[t_fast.len() - tail..]);
    let sc = loglog_slope(&x, &t_conv[t_conv.len() - tail..]);
    let ratios: Vec<f64> = t_fast.iter().zip(&t_conv).map(|(f, c)| f / c).collect();
    let falling = ratios.windows(2).all(|w| w[1] < w[0]);
    let ok = sf < 1.8 && falling && (1.8..=2.2).contains(&sc) && crossover.is_some_and(|m| m <= 1 << 14);
    r.line(
        "criterion 6 (runtime crossover, N=M)",
        ok,
        format!(
            "growth exponents fast {sf:.2} (bound < 1.8), conventional {sc:.2} (bound 1.8..2.2); \
             fast/conventional ratio falling with M: {falling}; M0 = {}",
            crossover.map_or("none".into(), |m| m.to_string())
        ),
    );
    for row in rows {
        println!("    {row}");
    }
}

fn zero_potential(r: &mut Report, xi: &[f64]) {
    let spec = SignalSpec { amplitude: 0.0, ..chirped(1 << 10, 1.0) };
    let mut ok = true;
    let mut parts = Vec::new();
    let mut record = |name: String, d: &ScatteringData| {
        let da = d.a.iter().map(|a| (a - 1.0).norm()).fold(0.0, f64::max);
        let db = d.b.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let pass = da <= 1e-13 && db <= 1e-13;
        ok &= pass;
        parts.push(format!("{name} {da:.1e}/{db:.1e}"));
    };
    for kind in SchemeKind::ALL {
        record(kind.to_string(), &conventional(&spec, kind, xi));
    }
    for (kind, h) in [(SchemeKind::Es6Pade3, 11.0), (SchemeKind::Es6Pade4, 15.0), (SchemeKind::Cn2, 2.0)] {
        record(format!("F{kind}"), &fast(&spec, kind, h, xi));
    }
    r.line("criterion 7 (zero potential, max |a-1| / max |b|)", ok, parts.join(", "));
}

fn discrete(r: &mut Report) {
    let exact = [c(0.0, 1.5), c(0.0, 0.5)];
    let mut zetas = Vec::new();
    for z in exact {
        zetas.push(refine_eigenvalue(&sech(2.0, 0), z + c(0.02, -0.03), DEFAULT_ORACLE_M).unwrap());
    }
    let oracle: Vec<_> = zetas.iter().map(|&z| fine_grid_oracle(&sech(2.0, 0), z, DEFAULT_ORACLE_M).unwrap()).collect();
    let drift = zetas.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);

    let grid = generate(&sech(2.0, 1 << 10)).unwrap();
    let mut ok = true;
    let mut worst_res: f64 = 0.0;
    let mut worst_r: f64 = 0.0;
    let mut err_r = Vec::new();
    for kind in SchemeKind::SIXTH_ORDER {
        let prep = Prepared::new(&grid, kind).unwrap();
        let errs: Vec<f64> = oracle
            .iter()
            .map(|o| {
                let pc = phase_coefficient(&prep, o.zeta, 1e-6).unwrap();
                worst_res = worst_res.max(pc.residual);
                relative_error(pc.r, o.r)
            })
            .collect();
        worst_r = worst_r.max(errs.iter().copied().fold(0.0, f64::max));
        err_r.push((kind, errs));
    }
    ok &= worst_res <= 1e-6 && worst_r <= 1e-5;
    let cayley_worst = (0..oracle.len()).all(|k| {
        let cay = err_r.iter().find(|(kind, _)| *kind == SchemeKind::Es6Cayley).unwrap().1[k];
        err_r.iter().all(|(_, e)| e[k] <= cay)
    });
    ok &= cayley_worst;
    r.line(
        "criterion 8 (bidirectional b at sech A=2 eigenvalues, M=2^10)",
        ok,
        format!(
            "max residual {worst_res:.2e} (bound 1e-6), max err_r {worst_r:.2e} (bound 1e-5), \
             ES6_Cayley worst: {cayley_worst}; oracle eigenvalues within {drift:.1e} of 1.5i, 0.5i"
        ),
    );
    for (kind, errs) in &err_r {
        println!("    {kind}: err_r at 1.5i {:.3e}, at 0.5i {:.3e}", errs[0], errs[1]);
    }
}

fn main() {
    let mut report = Report { passed: 0, total: 0 };
    let xi = linspace(-20.0, 20.0, N_XI);
    let reference = conventional(&chirped(M_REF, 1.0), SchemeKind::Es6, &xi);

    convergence(&mut report, &xi, &reference);
    invariant(&mut report, &xi);
    pade_consistency(&mut report);
    derivative(&mut report);
    fast_identity(&mut report, &xi, &reference);
    crossover(&mut report);
    zero_potential(&mut report, &xi);
    discrete(&mut report);

    println!("acceptance: {}/{} criteria lines passed", report.passed, report.total);
}
