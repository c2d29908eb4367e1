//! Command dispatch. Each command fills a [`Document`]; rendering is separate.

use std::io::Read;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use kdv_core::adler_moser::{bilinear_residual, potential, second_bilinear_residual, stationary_limit, ThetaSequence};
use kdv_core::darboux::{a_sequence, dt_potential, log_derivative, sigma_t, DarbouxContext};
use kdv_core::fundmat::{fundmat_e, fundmat_e0, phi_pm, q_bilinear_check, q_descend, q_family_bilinear, q_symmetry_check, specialization_gap};
use kdv_core::galois::{classify_galois, invariance_report};
use kdv_core::kdv::{gd_sequence, kdv_residual};
use kdv_core::lax::{check_solution, second_symmetric_power_check, zero_curvature};
use kdv_core::ring::{parse_ratfun, Poly, Rat, RatFun, Var};
use kdv_core::spectral::{classify_point, spectral_curve_with, transformed_curve, Green, Mu0, PointKind};
use kdv_core::{Error, ExpFun, Exponent, GaloisKind, Mat2, Sign};

use crate::cli::{Command, Energy, HierarchyArgs, SignArg, StationaryArgs};
use crate::config::{sign_char, Session, SessionConfig, TauMode};
use crate::emit::{CheckRow, CheckStatus, Document, Format, Value};
use crate::error::{CliError, CliResult};

static STDIN_TAKEN: AtomicBool = AtomicBool::new(false);

fn expression_text(text: &str) -> CliResult<String> {
    if text != "-" {
        return Ok(text.to_owned());
    }
    if STDIN_TAKEN.swap(true, Ordering::SeqCst) {
        return Err(CliError::Usage("only one argument may read stdin".into()));
    }
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf)?;
    Ok(buf.trim().to_owned())
}

/// Parse an expression argument; `-` reads it from stdin.
pub fn parse_expr(text: &str) -> CliResult<RatFun> {
    let text = expression_text(text)?;
    parse_ratfun(&text).map_err(|source| CliError::Expression { text, source })
}

fn parse_rational(text: &str) -> CliResult<Rat> {
    parse_expr(text)?.as_constant().ok_or_else(|| CliError::Usage(format!("`{text}` is not a rational number")))
}

/// `inf`, `E0`, or `E0,mu0` with `mu0` rational, `<q>i` or `?`.
pub fn parse_point(text: &str) -> CliResult<PointKind> {
    let text = text.trim();
    if text == "inf" {
        return Ok(PointKind::Infinity);
    }
    let (e0, mu0) = match text.split_once(',') {
        Some((e, m)) => (e.trim(), Some(m.trim())),
        None => (text, None),
    };
    let e0 = parse_rational(e0)?;
    let mu0 = match mu0 {
        None | Some("?") => Mu0::Unspecified,
        Some(m) => match m.strip_suffix('i') {
            Some("") | Some("+") => Mu0::Imaginary(Rat::from_integer(1.into())),
            Some("-") => Mu0::Imaginary(Rat::from_integer((-1).into())),
            Some(q) => Mu0::Imaginary(parse_rational(q.trim_end_matches('*'))?),
            None => match parse_rational(m)? {
                q if q == Rat::from_integer(0.into()) => Mu0::Zero,
                q => Mu0::Real(q),
            },
        },
    };
    Ok(PointKind::Affine { e0, mu0 })
}

fn rf(p: &Poly) -> RatFun {
    RatFun::from_poly(p.clone())
}

fn minus_lambda_sq() -> Poly {
    Poly::var(Var::LAMBDA).square().neg()
}

fn rational_entry(e: ExpFun) -> CliResult<RatFun> {
    e.as_rational().ok_or(CliError::Core(Error::UnrecognizedExtension))
}

fn sign_key(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "p",
        Sign::Minus => "m",
    }
}

fn signs(arg: SignArg) -> Vec<Sign> {
    match arg {
        SignArg::Plus => vec![Sign::Plus],
        SignArg::Minus => vec![Sign::Minus],
        SignArg::Both => vec![Sign::Plus, Sign::Minus],
    }
}

fn session_for(base: &SessionConfig, h: &HierarchyArgs) -> Session {
    Session::new(base.clone().apply(&h.overrides()))
}

/// Run one parsed command against the configured session.
pub fn run(command: &Command, base: &SessionConfig, provenance: bool) -> CliResult<Document> {
    let mut provenance_log = Vec::new();
    let mut doc = match command {
        Command::Theta { h, all } => with_session(base, h, &mut provenance_log, |s| theta(s, *all))?,
        Command::Potential { h, all, check, gd, symbolic_consts } => {
            with_session(base, h, &mut provenance_log, |s| potential_cmd(s, *all, *check, *gd, *symbolic_consts))?
        }
        Command::Adjust { h } => {
            let mut h = h.clone();
            h.adjusted = true;
            h.symbolic = false;
            h.taus = None;
            with_session(base, &h, &mut provenance_log, adjust)?
        }
        Command::Fundmat { h, energy, lambda, check } => {
            with_session(base, h, &mut provenance_log, |s| fundmat(s, *energy, lambda.as_deref(), *check))?
        }
        Command::Qpoly { h, sign, bilinear } => with_session(base, h, &mut provenance_log, |s| qpoly(s, *sign, *bilinear))?,
        Command::Verify { h, threads } => with_session(base, h, &mut provenance_log, |s| verify(s, *threads))?,
        Command::Darboux { u, seed, exp_level, exp_k, exp_lambda, r } => darboux(u, seed, *exp_level, *exp_k, exp_lambda.as_deref(), *r)?,
        Command::Spectral { s, point } => spectral(s, point.as_deref())?,
        Command::Green { s, point, seed, homogenized, appendix } => green(s, point.as_deref(), seed.as_deref(), *homogenized, appendix.as_deref())?,
        Command::Galois { h, energy, lambda, t, invariance, lambdas, times } => {
            with_session(base, h, &mut provenance_log, |s| galois(s, *energy, lambda.as_deref(), t.as_deref(), *invariance, lambdas, times))?
        }
        Command::Report { h, output } => {
            let doc = with_session(base, h, &mut provenance_log, report)?;
            if let Some(path) = output {
                let mut saved = doc.clone();
                saved.push("provenance", "\\mathrm{provenance}", Value::List(provenance_log.iter().cloned().map(Value::Text).collect()));
                std::fs::write(path, saved.render(Format::Json))?;
            }
            doc
        }
    };
    if provenance {
        doc.push("provenance", "\\mathrm{provenance}", Value::List(provenance_log.into_iter().map(Value::Text).collect()));
    }
    Ok(doc)
}

fn with_session(base: &SessionConfig, h: &HierarchyArgs, log: &mut Vec<String>, f: impl FnOnce(&mut Session) -> CliResult<Document>) -> CliResult<Document> {
    let mut session = session_for(base, h);
    let out = f(&mut session);
    log.extend(session.provenance().iter().cloned());
    out
}

fn theta(s: &mut Session, all: bool) -> CliResult<Document> {
    let n = s.config().n;
    let seq = s.thetas(n)?;
    let mut doc = Document::default();
    let from = if all { 0 } else { n };
    for k in from..=n {
        doc.push(format!("theta_{k}"), format!("\\theta_{{{k}}}"), seq.theta(k).clone());
    }
    Ok(doc)
}

fn potential_cmd(s: &mut Session, all: bool, check: bool, gd: Option<u32>, symbolic_consts: bool) -> CliResult<Document> {
    let (n, r) = (s.config().n, s.config().r);
    let seq = s.thetas(n)?.clone();
    let mut doc = Document::default();
    let from = if all { 0 } else { n };
    let mut rows = Vec::new();
    for k in from..=n {
        let u = potential(&seq, k)?;
        if check {
            rows.push(zero_row(format!("kdv_{r}(u_{k})"), &kdv_residual(&u, r)?));
        }
        doc.push(format!("u_{k}"), format!("u_{{{k}}}"), u);
    }
    if let Some(levels) = gd {
        let consts: Vec<RatFun> = if symbolic_consts { (1..=levels as u16).map(|j| RatFun::var(Var::c(j))).collect() } else { Vec::new() };
        let fs = gd_sequence(&potential(&seq, n)?, levels, &consts)?;
        for (j, f) in fs.fs().iter().enumerate() {
            doc.push(format!("f_{j}"), format!("f_{{{j}}}"), f.clone());
        }
    }
    if check {
        doc.push("checks", "", Value::Table(rows));
    }
    Ok(doc)
}

fn adjust(s: &mut Session) -> CliResult<Document> {
    let n = s.config().n;
    let seq = s.thetas(n)?.clone();
    let mut doc = Document::default();
    for (i, v) in seq.taus().values().iter().take(n.saturating_sub(1)).enumerate() {
        let j = i + 2;
        doc.push(format!("tau_{j}"), format!("\\tau_{{{j}}}"), v.clone());
    }
    let free: Vec<Value> = s.free_parameters().iter().map(|p| Value::Text(format!("tau_{}: coefficient of t^{} set to 0", p.index, p.degree))).collect();
    doc.push("free_parameters", "\\mathrm{free}", Value::List(free));
    Ok(doc)
}

fn fundmat(s: &mut Session, energy: Energy, lambda: Option<&str>, check: bool) -> CliResult<Document> {
    let (n, r) = (s.config().n, s.config().r);
    let mut doc = Document::default();
    let (mut b, e, key, tex) = match energy {
        Energy::Zero => (fundmat_e0(n, s.thetas(n + 1)?)?, Poly::zero(), format!("B_{n}_0"), format!("B^{{({r})}}_{{{n},0}}")),
        Energy::Nonzero => (fundmat_e(r, n, s.thetas(n)?)?, minus_lambda_sq(), format!("B_{n}_lambda"), format!("B^{{({r})}}_{{{n},\\lambda}}")),
    };
    let mut e = e;
    if let (Energy::Nonzero, Some(l)) = (energy, lambda) {
        let value = parse_expr(l)?;
        b = b.subs(Var::LAMBDA, &value)?;
        e = e.compose(Var::LAMBDA, value.as_poly().ok_or_else(|| CliError::Usage("lambda must be polynomial".into()))?);
    }
    let det = b.det()?;
    doc.push(key, tex, b.clone());
    doc.push("det", "\\det", det);
    if check {
        let u = potential(s.thetas(n)?, n)?;
        let (x, t) = check_solution(&b, &u, r, &e)?;
        doc.push("checks", "", Value::Table(vec![mat_row("Phi_x - U Phi", &x), mat_row("Phi_t - V Phi", &t)]));
    }
    Ok(doc)
}

fn qpoly(s: &mut Session, sign: SignArg, bilinear: bool) -> CliResult<Document> {
    let n = s.config().n;
    let mut doc = Document::default();
    for sg in signs(sign) {
        let fam = if bilinear {
            s.thetas(n)?;
            q_family_bilinear(sg, n, &[])?
        } else {
            s.q_family(sg, n)?
        };
        let c = sign_char(sg);
        for (k, q) in fam.qs().iter().enumerate() {
            doc.push(format!("Q{}_{k}", sign_key(sg)), format!("Q^{{{c}}}_{{{k}}}"), q.clone());
        }
    }
    Ok(doc)
}

fn zero_row(name: impl Into<String>, residual: &RatFun) -> CheckRow {
    let status = if residual.is_zero() { CheckStatus::Pass } else { CheckStatus::Fail };
    let detail = if residual.is_zero() { String::new() } else { format!("residual {residual}") };
    CheckRow { name: name.into(), status, detail }
}

fn eq_row(name: impl Into<String>, got: &RatFun, want: &RatFun) -> CheckRow {
    let ok = got == want;
    CheckRow { name: name.into(), status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail: if ok { String::new() } else { format!("got {got}, want {want}") } }
}

fn mat_row(name: &str, m: &Mat2) -> CheckRow {
    let ok = m.is_zero();
    CheckRow { name: name.into(), status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail: if ok { String::new() } else { format!("residual {m}") } }
}

fn error_row(name: String, e: impl std::fmt::Display) -> CheckRow {
    CheckRow { name, status: CheckStatus::Fail, detail: format!("error: {e}") }
}

type Check<'a> = Box<dyn Fn() -> Vec<CheckRow> + Send + Sync + 'a>;

/// Wrap a fallible check so an error becomes a failing row.
fn guarded<'a>(name: String, f: impl Fn() -> Result<Vec<CheckRow>, Error> + Send + Sync + 'a) -> Check<'a> {
    Box::new(move || f().unwrap_or_else(|e| vec![error_row(name.clone(), e)]))
}

/// The invariant suite for one session. `seq` reaches `theta_{n+1}`;
/// `timed` says whether the taus are adjusted to level `r`, which is when
/// the time halves of the checks apply.
fn verify_checks<'a>(seq: &'a ThetaSequence, r: u32, n: usize, timed: bool) -> Vec<Check<'a>> {
    let mut checks: Vec<Check<'a>> = Vec::new();
    let lam = RatFun::var(Var::LAMBDA);
    for k in 1..=n {
        checks.push(Box::new(move || vec![zero_row(format!("bilinear_{k}"), &rf(&bilinear_residual(seq, k)))]));
        checks.push(Box::new(move || vec![zero_row(format!("second_bilinear_{k}"), &rf(&second_bilinear_residual(seq, k)))]));
    }
    for k in 0..=n {
        if timed {
            checks.push(guarded(format!("kdv_{k}"), move || Ok(vec![zero_row(format!("kdv_{r}(u_{k})"), &kdv_residual(&potential(seq, k)?, r)?)])));
        }
        checks.push(guarded(format!("fundmat_e0_{k}"), move || {
            let b = fundmat_e0(k, seq)?;
            let (x, t) = check_solution(&b, &potential(seq, k)?, r, &Poly::zero())?;
            let mut rows = vec![mat_row(&format!("B_{k}_0 x-equation"), &x), eq_row(format!("det B_{k}_0"), &rational_entry_core(b.det()?)?, &RatFun::int(2 * k as i64 + 1))];
            if timed {
                rows.push(mat_row(&format!("B_{k}_0 t-equation"), &t));
            }
            Ok(rows)
        }));
        let lam = lam.clone();
        checks.push(guarded(format!("fundmat_e_{k}"), move || {
            let b = fundmat_e(r, k, seq)?;
            let (x, t) = check_solution(&b, &potential(seq, k)?, r, &minus_lambda_sq())?;
            let want = lam.pow(2 * k as i32 + 1)?.scale(&Rat::from_integer((-2).into()));
            let mut rows = vec![mat_row(&format!("B_{k}_lambda x-equation"), &x), eq_row(format!("det B_{k}_lambda"), &rational_entry_core(b.det()?)?, &want)];
            if timed {
                rows.push(mat_row(&format!("B_{k}_lambda t-equation"), &t));
            }
            let (p, m) = phi_pm(r, k, seq)?;
            rows.push(zero_row(format!("symmetric_square_{k}"), &rational_entry_core(second_symmetric_power_check(&p, &m, &potential(seq, k)?, &minus_lambda_sq())?)?));
            let kind = |b: &Mat2| classify_galois(b, r).map(|c| c.kind());
            rows.push(kind_row(format!("galois B_{k}_0"), kind(&fundmat_e0(k, seq)?)?, GaloisKind::Trivial));
            rows.push(kind_row(format!("galois B_{k}_lambda"), kind(&b)?, GaloisKind::MultiplicativeTorus));
            Ok(rows)
        }));
    }
    checks.push(guarded("q_families".into(), move || {
        let plus = kdv_core::fundmat::q_family(Sign::Plus, r, n, seq)?;
        let minus = kdv_core::fundmat::q_family(Sign::Minus, r, n, seq)?;
        let mut rows = Vec::new();
        for k in 1..n {
            rows.push(zero_row(format!("q_bilinear+_{k}"), &q_bilinear_check(&plus, k)));
            rows.push(zero_row(format!("q_bilinear-_{k}"), &q_bilinear_check(&minus, k)));
        }
        for k in 1..=n {
            rows.push(zero_row(format!("q_symmetry_{k}"), &q_symmetry_check(&plus, &minus, k)?));
            rows.push(eq_row(format!("q_descend+_{k}"), &q_descend(&plus, seq, k)?, plus.q(k - 1)));
            rows.push(eq_row(format!("q_descend-_{k}"), &q_descend(&minus, seq, k)?, minus.q(k - 1)));
        }
        Ok(rows)
    }));
    if n >= 1 {
        checks.push(guarded("specialization_gap".into(), move || {
            let g = specialization_gap(r, n, seq)?;
            Ok(vec![
                zero_row("gap det B_n_lambda(0)", &g.det_at_zero),
                eq_row("gap det B_n_0", &g.det_zero_energy, &RatFun::int(2 * n as i64 + 1)),
                zero_row("gap phi+(0) - (-1)^n phi-(0)", &g.column_gap),
            ])
        }));
    }
    for k in 0..n {
        checks.push(guarded(format!("darboux_{k}"), move || {
            let seed = ExpFun::rational(rf(seq.theta(k + 1)).div(&rf(seq.theta(k)))?);
            Ok(vec![eq_row(format!("darboux u_{k} -> u_{}", k + 1), &dt_potential(&potential(seq, k)?, &seed)?, &potential(seq, k + 1)?)])
        }));
    }
    checks.push(guarded("spectral".into(), move || {
        let (_, u0) = stationary_limit(seq, n)?;
        let g = Green::with_constants(&u0, n as u32, &[])?;
        let want = RatFun::var(Var::E).pow(2 * n as i32 + 1)?;
        let mut rows = vec![eq_row(format!("spectral curve s-KdV_{n}"), &g.curve().as_ratfun(), &want)];
        let ok = g.differential_identity()?.is_zero() && g.sigma_identities()?.iter().all(|q| q.is_zero());
        let (p, m) = g.riccati_residuals()?;
        let ok = ok && p.is_zero() && m.is_zero();
        rows.push(CheckRow { name: "green identities".into(), status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail: String::new() });
        Ok(rows)
    }));
    if timed {
        let n_u = n;
        checks.push(guarded("zero_curvature".into(), move || {
            Ok(vec![mat_row(&format!("zero curvature u_{n_u}"), &zero_curvature(&potential(seq, n_u)?, r, &Poly::var(Var::E))?)])
        }));
    }
    checks
}

fn rational_entry_core(e: ExpFun) -> Result<RatFun, Error> {
    e.as_rational().ok_or(Error::UnrecognizedExtension)
}

fn kind_row(name: String, got: GaloisKind, want: GaloisKind) -> CheckRow {
    let ok = got == want;
    CheckRow { name, status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail: if ok { got.to_string() } else { format!("got {got}, want {want}") } }
}

fn verify(s: &mut Session, threads: Option<usize>) -> CliResult<Document> {
    let (n, r) = (s.config().n, s.config().r);
    let timed = s.config().tau_mode != TauMode::Symbolic;
    let seq = s.thetas(n + 1)?.clone();
    let checks = verify_checks(&seq, r, n, timed);
    let workers = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get())).clamp(1, checks.len().max(1));
    let mut results: Vec<Vec<CheckRow>> = vec![Vec::new(); checks.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<&mut Vec<CheckRow>>> = results.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(check) = checks.get(i) else { break };
                let rows = check();
                **slots[i].lock().expect("slot lock") = rows;
            });
        }
    });
    drop(slots);
    let rows: Vec<CheckRow> = results.into_iter().flatten().collect();
    let mut doc = Document::default();
    doc.text("session", format!("r = {r}, n = {n}, tau = {}", s.config().tau_mode.name()));
    doc.push("checks", "", Value::Table(rows));
    Ok(doc)
}

fn darboux(u: &str, seed: &str, exp_level: Option<u32>, exp_k: i64, exp_lambda: Option<&str>, r: Option<u32>) -> CliResult<Document> {
    let u = parse_expr(u)?;
    let q = parse_expr(seed)?;
    let phi0 = match exp_level {
        None => ExpFun::rational(q),
        Some(level) => {
            let lambda = match exp_lambda {
                Some(l) => parse_expr(l)?,
                None => RatFun::var(Var::LAMBDA),
            };
            ExpFun::exp(Some(Arc::new(Exponent::new(level, lambda))), exp_k, q)
        }
    };
    let ctx = DarbouxContext::new(&u, &phi0)?;
    let mut doc = Document::default();
    doc.push("sigma", "\\sigma", log_derivative(&phi0)?);
    doc.push("E0", "E_0", ctx.e0().clone());
    doc.push("u_tilde", "\\tilde u", dt_potential(&u, &phi0)?);
    if let Some(r) = r {
        let seq = a_sequence(&u, ctx.sigma(), r)?;
        for (j, a) in seq.as_slice().iter().enumerate() {
            doc.push(format!("A_{j}"), format!("A_{{{j}}}"), a.clone());
        }
        doc.push("sigma_t", "\\sigma_{t}", sigma_t(&ctx, r)?);
        let mut rows: Vec<CheckRow> = (0..=r as usize).map(|i| zero_row(format!("corollary_sum_{i}"), &seq.corollary_sum(i))).collect();
        rows.extend(seq.transform_residuals()?.iter().enumerate().map(|(j, res)| zero_row(format!("f_{j}(u_tilde) - f_{j}(u) - A_{j}"), res)));
        doc.push("checks", "", Value::Table(rows));
    }
    Ok(doc)
}

fn stationary(s: &StationaryArgs) -> CliResult<(RatFun, Vec<Rat>)> {
    let u = parse_expr(&s.u)?;
    let consts = s.consts.iter().map(|c| parse_rational(c)).collect::<CliResult<_>>()?;
    Ok((u, consts))
}

fn spectral(s: &StationaryArgs, point: Option<&str>) -> CliResult<Document> {
    let (u, consts) = stationary(s)?;
    let curve = spectral_curve_with(&u, s.n, &consts)?;
    let mut doc = Document::default();
    doc.push("R", format!("R_{{{}}}", 2 * s.n + 1), curve.as_ratfun());
    doc.text("curve", curve.to_string());
    if let Some(p) = point {
        let pt = classify_point(&curve, parse_point(p)?)?;
        doc.text("class", pt.class().to_string());
        let t = transformed_curve(&curve, &pt)?;
        doc.push("R_transformed", "\\tilde R", t.as_ratfun());
        doc.text("transformed_curve", t.to_string());
    }
    Ok(doc)
}

fn green(s: &StationaryArgs, point: Option<&str>, seed: Option<&str>, homogenized: bool, appendix: Option<&str>) -> CliResult<Document> {
    let (u, consts) = stationary(s)?;
    let g = Green::with_constants(&u, s.n, &consts)?;
    let mut doc = Document::default();
    doc.push(format!("F_{}", s.n), format!("F_{{{}}}", s.n), g.f().clone());
    doc.push("R", format!("R_{{{}}}", 2 * s.n + 1), g.curve().as_ratfun());
    let (p, m) = g.riccati_residuals()?;
    let sig = g.sigma_identities()?;
    let ok = |b: bool| if b { CheckStatus::Pass } else { CheckStatus::Fail };
    let row = |name: &str, b: bool| CheckRow { name: name.into(), status: ok(b), detail: String::new() };
    let mut rows = vec![
        row("g g_xx/2 - (u - E) g^2 - g_x^2/4 = -1/4", g.differential_identity()?.is_zero()),
        row("riccati sigma+", p.is_zero()),
        row("riccati sigma-", m.is_zero()),
        row("sigma+ + sigma- = F_x/F", sig[0].is_zero()),
        row("sigma+ - sigma- = 2 i mu/F", sig[1].is_zero()),
        row("sigma+ sigma- = H/F", sig[2].is_zero()),
    ];
    if let Some(p) = point {
        let pt = classify_point(g.curve(), parse_point(p)?)?;
        doc.text("class", pt.class().to_string());
        if homogenized {
            let hg = g.homogenized(&pt)?;
            doc.push("phi_h", "\\Phi_h", hg.phi_h.clone());
            doc.push("phi", "\\tilde\\Phi", hg.dehomogenized()?);
            doc.push("R_transformed", "\\tilde R", hg.curve.as_ratfun());
        } else if let Some(seed) = seed {
            let e0 = pt.e0().cloned().ok_or_else(|| CliError::Usage("a seed needs an affine point".into()))?;
            doc.push("phi", "\\tilde\\Phi", g.transformed_phi_from_seed(&RatFun::constant(e0), &parse_expr(seed)?)?);
        } else {
            let t = g.transformed(&pt)?;
            doc.push("phi", "\\tilde\\Phi", t.phi);
            doc.push("F_transformed", "\\tilde F", t.f_tilde);
            doc.push("R_transformed", "\\tilde R", t.curve.as_ratfun());
        }
    }
    if let Some(e0) = appendix {
        let rep = g.appendix_divisions(&parse_expr(e0)?)?;
        doc.push("P", "P", rep.p.clone());
        if let Some(q) = rep.simple_root {
            doc.push("Q", format!("Q_{{{}}}", s.n), q);
        }
        if let Some(z) = rep.double_root {
            doc.push("Z_over_F", "\\frac{Z}{F} + \\frac{P^2}{4FF_0^2}", z);
        }
        rows.push(row("appendix divisions", true));
    }
    doc.push("checks", "", Value::Table(rows));
    Ok(doc)
}

fn galois(s: &mut Session, energy: Energy, lambda: Option<&str>, t: Option<&str>, invariance: bool, lambdas: &[String], times: &[String]) -> CliResult<Document> {
    let (n, r) = (s.config().n, s.config().r);
    let mut doc = Document::default();
    if invariance {
        let seq = s.thetas(n + 1)?.clone();
        let mut lams = vec![None];
        for l in lambdas {
            lams.push(Some(parse_rational(l)?));
        }
        let ts = times.iter().map(|t| parse_rational(t)).collect::<CliResult<Vec<_>>>()?;
        let rep = invariance_report(r, &seq, &(0..=n).collect::<Vec<_>>(), &lams, &ts)?;
        let rows = rep
            .rows
            .iter()
            .map(|row| {
                let lam = row.lambda.as_ref().map_or("lambda".into(), |l| l.to_string());
                let tt = row.t.as_ref().map_or("t".into(), |t| t.to_string());
                kind_row(format!("{:?} n={} lambda={lam} t={tt}", row.regime, row.n), row.kind, row.regime.expected())
            })
            .collect();
        doc.text("constant", rep.is_constant().to_string());
        doc.push("checks", "", Value::Table(rows));
        return Ok(doc);
    }
    let mut b = match energy {
        Energy::Zero => fundmat_e0(n, s.thetas(n + 1)?)?,
        Energy::Nonzero => fundmat_e(r, n, s.thetas(n)?)?,
    };
    if let Some(l) = lambda {
        b = b.subs(Var::LAMBDA, &parse_expr(l)?)?;
    }
    if let Some(t) = t {
        b = b.subs(Var::T, &parse_expr(t)?)?;
    }
    let class = classify_galois(&b, r)?;
    doc.text("group", class.kind().to_string());
    if let kdv_core::GaloisClass::MultiplicativeTorus { lambda, offset, .. } = class {
        doc.push("lambda", "\\lambda", lambda);
        doc.push("offset", "L - \\lambda x", offset);
    }
    Ok(doc)
}

fn report(s: &mut Session) -> CliResult<Document> {
    let (n, r) = (s.config().n, s.config().r);
    let mut doc = Document::default();
    doc.text("session", s.config().name.clone());
    doc.push("r", "r", Value::Int(r as i64));
    doc.push("n", "n", Value::Int(n as i64));
    doc.text("tau_mode", s.config().tau_mode.name());
    let seq = s.thetas(n + 1)?.clone();
    for (i, v) in seq.taus().values().iter().take(n.saturating_sub(1)).enumerate() {
        doc.push(format!("tau_{}", i + 2), format!("\\tau_{{{}}}", i + 2), v.clone());
    }
    doc.push(format!("theta_{n}"), format!("\\theta_{{{n}}}"), seq.theta(n).clone());
    doc.push(format!("u_{n}"), format!("u_{{{n}}}"), potential(&seq, n)?);
    let b0 = fundmat_e0(n, &seq)?;
    let b = fundmat_e(r, n, &seq)?;
    doc.push(format!("det_B_{n}_0"), format!("\\det B_{{{n},0}}"), rational_entry(b0.det()?)?);
    doc.push(format!("det_B_{n}_lambda"), format!("\\det B_{{{n},\\lambda}}"), rational_entry(b.det()?)?);
    for sg in [Sign::Plus, Sign::Minus] {
        let fam = s.q_family(sg, n)?;
        doc.push(format!("Q{}_{n}", sign_key(sg)), format!("Q^{{{}}}_{{{n}}}", sign_char(sg)), fam.q(n).clone());
    }
    doc.text("galois_B_0", classify_galois(&b0, r)?.kind().to_string());
    doc.text("galois_B_lambda", classify_galois(&b, r)?.kind().to_string());
    let (_, u0) = stationary_limit(&seq, n)?;
    doc.push("stationary_u", "u^0", u0.clone());
    doc.text("spectral_curve", spectral_curve_with(&u0, n as u32, &[])?.to_string());
    Ok(doc)
}

/// Exit-code aware wrapper used by the binary and the tests.
pub fn execute(args: &[String]) -> (i32, String, String) {
    use clap::Parser;
    let cli = match crate::cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { crate::error::ExitCode::Usage as i32 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (code, String::new(), text) };
        }
    };
    let result = SessionConfig::load(cli.config.as_deref(), &cli.session).and_then(|base| run(&cli.command, &base, cli.provenance));
    match result {
        Ok(doc) => {
            let out = doc.render(cli.format);
            match doc.failures() {
                0 => (0, out, String::new()),
                k => (CliError::ChecksFailed(k).exit_code() as i32, out, format!("kdv: {k} check(s) failed\n")),
            }
        }
        Err(e) => (e.exit_code() as i32, String::new(), format!("kdv: {e}\n")),
    }
}
