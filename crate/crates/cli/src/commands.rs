use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use opuc::algebra::{cabs_f64, with_digits, BigReal, Cx, Precision, Real};
use opuc::classify::{catalog_membership, classify_report, positivity_residual, Roots, MEMBERSHIP_TOL};
use opuc::differences::{difference_residual, propagate, seed_layout, DifferenceEquation, DifferenceId};
use opuc::moments::{
    compute_moments, default_moment_count, integration_by_parts_residual, MomentTable, MomentTableJson,
};
use opuc::mopuc::{max_deviation, szego_sequence, verblunsky_closed_form, OpucSequence};
use opuc::relations::{
    coefficient_identities, snn_consistency, specialized_relation, structure_residual, RelationId, Variant,
};
use opuc::weights::{
    boundary_check, pearson_pairs, pearson_residual, sample_catalog, CatalogEntry, Family, WeightSpec,
};
use opuc::Error;

use crate::args::{
    complex, ClassifyArgs, Format, Method, MomentsArgs, PlotArgs, RunArgs, Suite, VerblunskyArgs, VerifyArgs,
};
use crate::svg;

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(s) => f.write_str(s),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Lib(e) => match e {
                Error::NumericalBreakdown { .. }
                | Error::QuadratureFailure { .. }
                | Error::UnsolvableStep(_)
                | Error::NotEvaluable { .. }
                | Error::Infeasible(_)
                | Error::GridOnSingularity(_) => 3,
                _ => 2,
            },
        }
    }
}

type Out<T> = Result<T, CliError>;

macro_rules! at_precision {
    ($p:expr, $f:ident ( $($arg:expr),* )) => {
        match $p {
            Precision::Double => $f::<f64>($($arg),*),
            Precision::Extended { digits } => with_digits(digits, || $f::<BigReal>($($arg),*)),
        }
    };
}

fn emit(out: &Option<PathBuf>, content: &str) -> Out<()> {
    match out {
        Some(p) => fs::write(p, content).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read(p: &Path) -> Out<String> {
    fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn json<S: Serialize>(v: &S) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn imported(run: &RunArgs) -> Out<Option<MomentTableJson>> {
    match &run.moments {
        Some(p) => {
            serde_json::from_str(&read(p)?).map(Some).map_err(|e| Error::Parse(format!("{}: {e}", p.display())).into())
        }
        None => Ok(None),
    }
}

/// Precision of the run: an imported table keeps the one it was written in.
fn precision(run: &RunArgs, table: &Option<MomentTableJson>) -> Out<Precision> {
    Ok(match table {
        Some(t) => t.precision,
        None => run.precision()?,
    })
}

fn moment_table<T: Real>(
    spec: &WeightSpec,
    table: &Option<MomentTableJson>,
    n: usize,
    p: Precision,
) -> Out<MomentTable<T>> {
    let need = default_moment_count(n);
    match table {
        Some(j) => {
            let t = MomentTable::<T>::from_json(j)?;
            if t.n < need {
                return Err(Error::MomentRangeExceeded { index: need as i64, n: t.n }.into());
            }
            Ok(t)
        }
        None => Ok(compute_moments::<T>(spec, need, p)?),
    }
}

pub fn moments(a: &MomentsArgs) -> Out<bool> {
    let spec = a.weight.spec()?;
    let p = a.run.precision()?;
    let content = at_precision!(p, moments_run(&spec, &a.run, p))?;
    emit(&a.run.out, &content)?;
    Ok(true)
}

fn moments_run<T: Real>(spec: &WeightSpec, run: &RunArgs, p: Precision) -> Out<String> {
    let t = compute_moments::<T>(spec, run.n, p)?;
    match run.format.unwrap_or(Format::Json) {
        Format::Json => Ok(json(&t.to_json())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["k", "re", "im"]).map_err(csv_err)?;
            for (k, m) in t.entries() {
                w.write_record([k.to_string(), m.re.to_decimal(), m.im.to_decimal()]).map_err(csv_err)?;
            }
            finish(w)
        }
        Format::Svg => Err(Error::Parse("moments are written as json or csv".into()).into()),
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Out<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Equation used to propagate coefficients for each family.
fn difference_route(family: &Family) -> Option<DifferenceId> {
    Some(match family {
        Family::Lebesgue | Family::SriRanga { .. } | Family::CircularJacobi { .. } => DifferenceId::RangaTwoTerm,
        Family::JacobiOpuc { .. } => DifferenceId::JacobiTwoTerm,
        Family::GeneralizedJacobi { .. } => DifferenceId::GenJacobiFirst,
        Family::Bessel { .. } => DifferenceId::Painleve,
        Family::ExpSine { .. } => DifferenceId::ComplexPainleve,
        Family::HalfPlanePole { .. } => DifferenceId::HalfPlaneFirst,
        Family::RotatedCos { .. } => return None,
    })
}

fn by_difference<T: Real>(spec: &WeightSpec, seq: &OpucSequence<T>, n: usize) -> Out<Vec<Cx<T>>> {
    let id = difference_route(&spec.family)
        .ok_or_else(|| Error::UnknownRelation(format!("no difference equation for {}", spec.family.name())))?;
    let eq = DifferenceEquation::<T>::for_family(id, spec)?;
    let (arity, start) = seed_layout(id);
    let seeds = (start..start + arity as i64).map(|k| seq.alpha(k)).collect::<Result<Vec<_>, _>>()?;
    let prop = propagate(&eq, &seeds, n as i64)?;
    if let Some(k) = prop.first_violation {
        let modulus = prop.alpha(k).map(cabs_f64).unwrap_or(f64::NAN);
        return Err(Error::NumericalBreakdown { n: k.max(0) as usize, modulus }.into());
    }
    Ok((0..=n as i64).map(|k| prop.alpha(k).cloned().expect("propagated")).collect())
}

struct Routes<T: Real> {
    names: Vec<&'static str>,
    values: Vec<Vec<Cx<T>>>,
}

fn routes<T: Real>(
    spec: &WeightSpec,
    run: &RunArgs,
    method: Method,
    table: &Option<MomentTableJson>,
    p: Precision,
) -> Out<Routes<T>> {
    let n = run.n;
    let mut r = Routes { names: vec![], values: vec![] };
    let needs_moments = matches!(method, Method::Moments | Method::Difference | Method::All);
    let seq = if needs_moments {
        let t = moment_table::<T>(spec, table, n.max(1), p)?;
        Some(szego_sequence(&t, n.max(1) + 1)?)
    } else {
        None
    };
    if matches!(method, Method::Moments | Method::All) {
        let seq = seq.as_ref().expect("built");
        r.names.push("moments");
        r.values.push(seq.verblunsky()[..=n].to_vec());
    }
    if matches!(method, Method::Closed | Method::All) {
        match verblunsky_closed_form::<T>(spec, n) {
            Ok(v) => {
                r.names.push("closed");
                r.values.push(v);
            }
            Err(e @ Error::NoClosedForm(_)) if method == Method::All => eprintln!("skipping closed: {e}"),
            Err(e) => return Err(e.into()),
        }
    }
    if matches!(method, Method::Difference | Method::All) {
        match by_difference(spec, seq.as_ref().expect("built"), n) {
            Ok(v) => {
                r.names.push("difference");
                r.values.push(v);
            }
            Err(CliError::Lib(e @ Error::UnknownRelation(_))) if method == Method::All => {
                eprintln!("skipping difference: {e}")
            }
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

#[derive(Serialize)]
struct RouteJson {
    method: String,
    alphas: Vec<(String, String)>,
}

#[derive(Serialize)]
struct DeviationJson {
    between: (String, String),
    max_deviation: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerblunskyJson {
    weight: CatalogEntry,
    precision: String,
    n: usize,
    routes: Vec<RouteJson>,
    deviations: Vec<DeviationJson>,
}

pub fn verblunsky(a: &VerblunskyArgs) -> Out<bool> {
    let spec = a.weight.spec()?;
    let table = imported(&a.run)?;
    let p = precision(&a.run, &table)?;
    let (content, pass) = at_precision!(p, verblunsky_run(&spec, &a.run, a.method, &table, p))?;
    emit(&a.run.out, &content)?;
    Ok(pass)
}

fn verblunsky_run<T: Real>(
    spec: &WeightSpec,
    run: &RunArgs,
    method: Method,
    table: &Option<MomentTableJson>,
    p: Precision,
) -> Out<(String, bool)> {
    let r = routes::<T>(spec, run, method, table, p)?;
    let tol = run.tol.unwrap_or(p.default_tolerance());
    let mut deviations = vec![];
    for i in 1..r.values.len() {
        let d = max_deviation(&r.values[0], &r.values[i]);
        deviations.push(DeviationJson {
            between: (r.names[0].into(), r.names[i].into()),
            max_deviation: d,
            tolerance: tol,
            pass: d <= tol,
        });
    }
    let pass = deviations.iter().all(|d| d.pass);
    let content = match run.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            let mut header = vec!["n".to_string()];
            for name in &r.names {
                header.push(format!("{name}_re"));
                header.push(format!("{name}_im"));
            }
            if r.values.len() > 1 {
                header.push("max_dev".into());
            }
            w.write_record(&header).map_err(csv_err)?;
            for k in 0..=run.n {
                let mut row = vec![k.to_string()];
                for v in &r.values {
                    row.push(v[k].re.to_decimal());
                    row.push(v[k].im.to_decimal());
                }
                if r.values.len() > 1 {
                    let dev = r.values[1..]
                        .iter()
                        .map(|v| cabs_f64(&(v[k].clone() - r.values[0][k].clone())))
                        .fold(0.0, f64::max);
                    row.push(format!("{dev:e}"));
                }
                w.write_record(&row).map_err(csv_err)?;
            }
            finish(w)?
        }
        Format::Json => json(&VerblunskyJson {
            weight: CatalogEntry::from_spec(spec, 0),
            precision: p.label(),
            n: run.n,
            routes: r
                .names
                .iter()
                .zip(&r.values)
                .map(|(name, v)| RouteJson {
                    method: name.to_string(),
                    alphas: v.iter().map(|a| (a.re.to_decimal(), a.im.to_decimal())).collect(),
                })
                .collect(),
            deviations,
        }),
        Format::Svg => {
            let series = r
                .names
                .iter()
                .zip(&r.values)
                .map(|(name, v)| (name.to_string(), v.iter().map(|a| (a.re.to_f64(), a.im.to_f64())).collect()))
                .collect::<Vec<_>>();
            svg::disk(&series)
        }
    };
    Ok((content, pass))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub sup: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Worst of several residuals; any error fails the check.
    fn over(
        suite: &'static str,
        name: String,
        tolerance: f64,
        values: impl IntoIterator<Item = Result<f64, Error>>,
    ) -> Check {
        let mut sup: f64 = 0.0;
        let mut note = None;
        for v in values {
            match v {
                Ok(x) if x.is_nan() => sup = f64::NAN,
                Ok(x) => sup = sup.max(x),
                Err(e) => {
                    note.get_or_insert(e.to_string());
                }
            }
        }
        let pass = note.is_none() && sup <= tolerance;
        Check { suite, name, sup: sup.is_finite().then_some(sup), tolerance, pass, note }
    }

    fn flag(suite: &'static str, name: String, ok: bool) -> Check {
        Check { suite, name, sup: None, tolerance: 0.0, pass: ok, note: None }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<CatalogEntry>,
    precision: String,
    n: usize,
    grid: usize,
    checks: Vec<Check>,
    pass: bool,
}

pub fn parse_roots(s: &str) -> Result<Roots, Error> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("deg0") || s.is_empty() {
        return Ok(Roots::Deg0);
    }
    let parts = s.split(',').map(|p| complex("roots", p)).collect::<Result<Vec<Complex64>, _>>()?;
    match parts[..] {
        [r] => Ok(Roots::Deg1 { r }),
        [r1, r2] => Ok(Roots::Deg2 { r1, r2 }),
        _ => Err(Error::Parse(format!("--roots: expected one or two roots, got {}", parts.len()))),
    }
}

pub fn verify(a: &VerifyArgs) -> Out<bool> {
    let wants = |s: Suite| a.suite == s || a.suite == Suite::All;
    let spec = match (&a.weight.weight, a.suite) {
        (None, Suite::Classify) => None,
        _ => Some(a.weight.spec()?),
    };
    let table = imported(&a.run)?;
    let p = precision(&a.run, &table)?;
    let tol = a.run.tol.unwrap_or(p.default_tolerance());
    let mut checks = vec![];
    if let Some(spec) = &spec {
        if wants(Suite::Pearson) || wants(Suite::Structure) || wants(Suite::Difference) {
            checks.extend(at_precision!(p, verify_weight(spec, &a.run, a.suite, &table, p, tol))?);
        }
        if wants(Suite::Classify) {
            for m in catalog_membership(std::slice::from_ref(spec))? {
                checks.push(Check {
                    suite: "classify",
                    name: format!("membership {}", m.label),
                    sup: Some(m.residual),
                    tolerance: MEMBERSHIP_TOL,
                    pass: m.pass,
                    note: None,
                });
            }
        }
    }
    if wants(Suite::Classify) {
        if let Some(r) = &a.roots {
            checks.extend(roots_checks(parse_roots(r)?, a.run.grid)?);
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        weight: spec.as_ref().map(|s| CatalogEntry::from_spec(s, 0)),
        precision: p.label(),
        n: a.run.n,
        grid: a.run.grid,
        checks,
        pass,
    };
    let content = match a.run.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(["suite", "name", "sup", "tolerance", "pass", "note"]).map_err(csv_err)?;
            for c in &report.checks {
                w.write_record([
                    c.suite.to_string(),
                    c.name.clone(),
                    c.sup.map(|s| format!("{s:e}")).unwrap_or_default(),
                    format!("{:e}", c.tolerance),
                    c.pass.to_string(),
                    c.note.clone().unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            finish(w)?
        }
        Format::Svg => return Err(Error::Parse("verify writes json or csv".into()).into()),
    };
    emit(&a.run.out, &content)?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "FAIL {} {}: sup {:?} tol {:e}{}",
            c.suite,
            c.name,
            c.sup,
            c.tolerance,
            c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    Ok(pass)
}

fn roots_checks(roots: Roots, grid: usize) -> Out<Vec<Check>> {
    let report = classify_report(roots, &sample_catalog())?;
    let mut out = vec![];
    for m in &report.memberships {
        out.push(Check {
            suite: "classify",
            name: format!("{} {} in solution space", m.family, m.label),
            sup: Some(m.residual),
            tolerance: MEMBERSHIP_TOL,
            pass: m.pass,
            note: None,
        });
    }
    let sys = opuc::classify::build_system(roots);
    let mut points = vec![("particular".to_string(), report.particular.clone())];
    for (i, v) in report.nullspace_basis.iter().enumerate() {
        let x: Vec<f64> = report.particular.iter().zip(v).map(|(p, e)| p + e).collect();
        points.push((format!("particular + basis {}", i + 1), x));
    }
    for (name, x) in points {
        let r = positivity_residual(roots, sys.b_of(&x), grid);
        out.push(Check::over("classify", format!("log-derivative real for {name}"), 1e-8, [Ok(r)]));
    }
    Ok(out)
}

fn verify_weight<T: Real>(
    spec: &WeightSpec,
    run: &RunArgs,
    suite: Suite,
    table: &Option<MomentTableJson>,
    p: Precision,
    tol: f64,
) -> Out<Vec<Check>> {
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let n = run.n.max(2);
    let t = moment_table::<T>(spec, table, n, p)?;
    let seq = szego_sequence(&t, n + 1)?;
    let pairs = pearson_pairs::<T>(spec);
    let mut out = vec![];
    if wants(Suite::Pearson) {
        for pair in &pairs {
            let r = pearson_residual(spec, pair, run.grid, tol).map(|r| r.sup);
            out.push(Check::over("pearson", format!("log-derivative {}", pair.label), tol, [r]));
            out.push(Check::flag("pearson", format!("boundary {}", pair.label), boundary_check(spec, pair)));
            let mut ibp = vec![];
            for m in 0..=n {
                match seq.phi(m) {
                    Ok(phi) => ibp.extend((0..=m).map(|k| integration_by_parts_residual(&t, pair, phi, k))),
                    Err(e) => ibp.push(Err(e)),
                }
            }
            out.push(Check::over("pearson", format!("integration by parts {}", pair.label), tol, ibp));
        }
    }
    if wants(Suite::Structure) {
        for pair in &pairs {
            for v in Variant::ALL {
                let r = (2..=n).map(|m| structure_residual(pair, &seq, m, run.grid, v, tol).map(|r| r.sup));
                out.push(Check::over("structure", format!("{v:?} {}", pair.label), tol, r.collect::<Vec<_>>()));
            }
            let r = (2..=n).map(|m| snn_consistency(pair, &seq, m));
            out.push(Check::over("structure", format!("s_nn forms agree {}", pair.label), tol, r.collect::<Vec<_>>()));
        }
        for id in RelationId::for_family(&spec.family) {
            let r = (2..=n).map(|m| specialized_relation(spec, id, &seq, m, run.grid, tol).map(|r| r.sup));
            out.push(Check::over("structure", id.name().to_string(), tol, r.collect::<Vec<_>>()));
        }
        let mut identities: Vec<(String, Vec<Result<f64, Error>>)> = vec![];
        for m in 2..=n {
            match coefficient_identities(spec, &seq, m) {
                Ok(list) => {
                    for id in list {
                        match identities.iter_mut().find(|(name, _)| *name == id.name) {
                            Some((_, v)) => v.push(Ok(id.residual)),
                            None => identities.push((id.name, vec![Ok(id.residual)])),
                        }
                    }
                }
                Err(e) => identities.push(("identities".into(), vec![Err(e)])),
            }
        }
        for (name, v) in identities {
            out.push(Check::over("structure", name, tol, v));
        }
    }
    if wants(Suite::Difference) {
        let mut eqs = vec![];
        for pair in &pairs {
            for id in DifferenceId::ALL.into_iter().filter(|id| id.is_general()) {
                eqs.push((format!("{id} {}", pair.label), DifferenceEquation::general(id, pair.clone())?));
            }
        }
        for eq in DifferenceEquation::<T>::applicable(spec) {
            eqs.push((eq.id.to_string(), eq));
        }
        for (name, eq) in eqs {
            let top = if eq.id == DifferenceId::RangaForward { n as i64 - 1 } else { n as i64 };
            let r = (eq.id.min_n()..=top).map(|m| difference_residual(&eq, &seq, m));
            out.push(Check::over("difference", name, tol, r.collect::<Vec<_>>()));
        }
    }
    Ok(out)
}

pub fn classify(a: &ClassifyArgs) -> Out<bool> {
    let report = classify_report(parse_roots(&a.roots)?, &sample_catalog())?;
    emit(&a.out, &json(&report))?;
    Ok(report.pass())
}

pub fn plot(a: &PlotArgs) -> Out<bool> {
    let content = match &a.input {
        Some(path) => plot_file(path)?,
        None => {
            let spec = a.weight.spec()?;
            let table = imported(&a.run)?;
            let p = precision(&a.run, &table)?;
            at_precision!(p, plot_routes(&spec, &a.run, a.method, &table, p))?
        }
    };
    emit(&a.run.out, &content)?;
    Ok(true)
}

fn plot_routes<T: Real>(
    spec: &WeightSpec,
    run: &RunArgs,
    method: Method,
    table: &Option<MomentTableJson>,
    p: Precision,
) -> Out<String> {
    let r = routes::<T>(spec, run, method, table, p)?;
    let series = r
        .names
        .iter()
        .zip(&r.values)
        .map(|(name, v)| (name.to_string(), v.iter().map(|a| (a.re.to_f64(), a.im.to_f64())).collect()))
        .collect::<Vec<_>>();
    Ok(svg::disk(&series))
}

/// Residual table `n,residual` becomes a polyline; `*_re,*_im` column pairs become points in the disk.
fn plot_file(path: &Path) -> Out<String> {
    let mut rd = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let rows: Vec<Vec<f64>> = rd
        .records()
        .map(|r| r.map(|r| r.iter().map(|s| s.parse::<f64>().unwrap_or(f64::NAN)).collect()))
        .collect::<Result<_, _>>()
        .map_err(csv_err)?;
    let col = |name: &str| headers.iter().position(|h| h == name);
    if let (Some(n), Some(r)) = (col("n"), col("residual")) {
        let pts = rows.iter().map(|row| (row[n], row[r])).collect();
        return Ok(svg::residuals(&[("residual".into(), pts)]));
    }
    let mut series = vec![];
    for (i, h) in headers.iter().enumerate() {
        if let Some(stem) = h.strip_suffix("_re") {
            if let Some(j) = col(&format!("{stem}_im")) {
                series.push((stem.to_string(), rows.iter().map(|row| (row[i], row[j])).collect()));
            }
        }
    }
    if series.is_empty() {
        return Err(Error::Parse(format!("{}: no n,residual or *_re,*_im columns", path.display())).into());
    }
    Ok(svg::disk(&series))
}
