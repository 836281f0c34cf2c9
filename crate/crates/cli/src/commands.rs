use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use pascal_adic::acceptance::run_all;
use pascal_adic::blocks::{materialize, materialize_generalized, BlockId};
use pascal_adic::conway::{verify_concatenation, ConwaySeq};
use pascal_adic::curves::{
    dyadic_grid, eval_f, phi_denominator, sample_curve, sup_distance, BlockCurve, CurveSamples,
    GCurve, RenormMode, RenormOptions,
};
use pascal_adic::dyadicg::{
    cohomology_test, covariance_pg, polynomial_pg, Cohomology, DyadicFunction,
};
use pascal_adic::exactnum::{binomial_rational, binomial_table, int, parse_rational, rat, to_f64};
use pascal_adic::selfaffine::{
    canonical_array, eval_mp, family_array, sample_mp, transition_array, TriangularArray,
};
use pascal_adic::towers::{
    build_towers, orbit_letters, orbit_sums, Extension, Point, DEFAULT_TOWER_CAP,
};
use pascal_adic::Rational;
use serde_json::{json, Value};

use crate::output::{fmt_rational, Cell, Format, Output, Table};
use crate::{Command, GlobalArgs};

/// Vertex lists longer than this need `--samples`.
const VERTEX_CAP: u64 = 1 << 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] pascal_adic::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(_) | CliError::Invalid(_) => 2,
            CliError::Io { .. } => 1,
            CliError::CheckFailed(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ArrayKind {
    Canonical,
    Transition,
    Family,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Extend {
    Fixed,
    Zeros,
    Bernoulli,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

/// A rendered result plus whether the command's own check held.
struct Report {
    output: Output,
    failure: Option<String>,
}

impl From<Output> for Report {
    fn from(output: Output) -> Self {
        Report {
            output,
            failure: None,
        }
    }
}

pub fn run(global: &GlobalArgs, command: &Command) -> Result<()> {
    let (mut format, dest) = match global.out.as_deref() {
        Some("csv") => (Format::Csv, None),
        Some("json") => (Format::Json, None),
        Some(path) => (Format::Csv, Some(PathBuf::from(path))),
        None => (Format::Csv, None),
    };
    if let Some(f) = global.format {
        format = f;
    }
    let report = dispatch(global, command)?;
    let text = report.output.render(format, global.exact);
    match dest {
        Some(path) => fs::write(&path, text).map_err(|source| CliError::Io { path, source })?,
        None => print!("{text}"),
    }
    match report.failure {
        Some(msg) => Err(CliError::CheckFailed(msg)),
        None => Ok(()),
    }
}

fn dispatch(global: &GlobalArgs, command: &Command) -> Result<Report> {
    let exact = global.exact;
    Ok(match command {
        Command::Word {
            n,
            k,
            alphabet,
            cap,
        } => word(*n, *k, *alphabet, *cap)?.into(),
        Command::Curve { n, k, g, samples } => curve(*n, *k, g.as_deref(), *samples)?.into(),
        Command::Blancmange { p, samples, eps } => blancmange(p, *samples, *eps)?.into(),
        Command::Array { kind, p, m, s } => array(*kind, p.as_deref(), *m, *s, exact)?.into(),
        Command::Orbit {
            x,
            steps,
            g,
            extend,
            p,
            max_depth,
        } => orbit(x, *steps, g.as_deref(), *extend, p, *max_depth, global.seed)?.into(),
        Command::Towers { n } => towers(*n)?.into(),
        Command::Poly { g } => poly(g, exact)?.into(),
        Command::Cohomology { g } => cohomology(g, exact)?.into(),
        Command::Conway {
            max,
            verify_concat,
            lines,
        } => {
            if *verify_concat {
                verify(*lines)?
            } else {
                conway(*max)?.into()
            }
        }
        Command::Converge {
            p,
            n_list,
            g,
            grid_bits,
        } => converge(p, n_list, g.as_deref(), *grid_bits)?.into(),
        Command::Figure { name } => figure(*name)?.into(),
        Command::Selftest {
            inject_fault,
            timed,
        } => selftest(inject_fault.as_deref(), *timed, global.seed)?,
    })
}

fn read_g(path: &Path) -> Result<DyadicFunction> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(DyadicFunction::from_json(&text)?)
}

fn probability(p: &str) -> Result<Rational> {
    let p = parse_rational(p)?;
    if p <= Rational::zero() || p >= int(1) {
        return Err(invalid(format!(
            "p = {p} must lie strictly between 0 and 1"
        )));
    }
    Ok(p)
}

fn curve_table(samples: &CurveSamples) -> Table {
    let mut table = Table::new(vec!["t", "value"]);
    for (t, v) in samples.ts().iter().zip(samples.values()) {
        table.push(vec![t.into(), v.into()]);
    }
    table
}

fn word(n: i64, k: i64, alphabet: Option<u32>, cap: u64) -> Result<Output> {
    match alphabet {
        None | Some(1) => {
            let w = materialize(BlockId::new(n, k)?, cap)?;
            Ok(Output::Text {
                json: Some(json!({ "n": n, "k": k, "word": w })),
                text: format!("{w}\n"),
            })
        }
        Some(0) => Err(invalid("the alphabet level must be at least 1")),
        Some(n0) => {
            let letters: Vec<u32> =
                materialize_generalized(n0, BlockId::generalized(n0, n, k)?, cap)?
                    .into_iter()
                    .map(|l| l.index())
                    .collect();
            let text: Vec<String> = letters.iter().map(u32::to_string).collect();
            Ok(Output::Text {
                json: Some(json!({ "n": n, "k": k, "alphabet": n0, "letters": letters })),
                text: format!("{}\n", text.join(" ")),
            })
        }
    }
}

fn curve(n: i64, k: i64, g: Option<&Path>, samples: Option<usize>) -> Result<Output> {
    let len = |id: BlockId| binomial_rational(id.n() as u64, id.k() as i64);
    let vertex_count = |id: BlockId| -> Result<usize> {
        let c = len(id).to_integer();
        match c.to_u64() {
            Some(c) if c <= VERTEX_CAP => Ok(c as usize),
            _ => Err(invalid(format!(
                "C({n},{k}) vertices exceed {VERTEX_CAP}; pass --samples"
            ))),
        }
    };
    let points = match g {
        None => {
            let id = BlockId::new(n, k)?;
            let c = BlockCurve::new(id)?;
            match samples {
                Some(s) => sample_curve(|t| c.eval(t), s)?,
                None => {
                    vertex_count(id)?;
                    c.vertices()?
                }
            }
        }
        Some(path) => {
            let g = read_g(path)?;
            let id = BlockId::generalized(g.level(), n, k)?;
            let c = GCurve::new(&g, id, &RenormOptions::default())?;
            if c.renorm().mode == RenormMode::ArrayApprox {
                eprintln!(
                    "warning: R^g from a truncated sub-block scan, estimated error {}",
                    fmt_rational(&c.renorm().error_bound, false)
                );
            }
            let s = match samples {
                Some(s) => s,
                None => vertex_count(id)?,
            };
            sample_curve(|t| c.eval(t), s)?
        }
    };
    Ok(Output::Table(curve_table(&points)))
}

fn blancmange(p: &str, samples: usize, eps: f64) -> Result<Output> {
    let p = probability(p)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(invalid("eps must be positive"));
    }
    let curve = sample_mp(&p, samples, eps)?;
    let mut table = Table::new(vec!["t", "value"]);
    for (t, v) in curve.ts().iter().zip(curve.values()) {
        table.push(vec![t.into(), to_f64(v).into()]);
    }
    Ok(Output::Table(table))
}

fn array_json(a: &TriangularArray, exact: bool) -> Value {
    Value::Array(
        a.lines()
            .iter()
            .map(|line| {
                line.iter()
                    .map(|(x, y)| json!([fmt_rational(x, exact), fmt_rational(y, exact)]))
                    .collect()
            })
            .collect(),
    )
}

fn array_table(a: &TriangularArray) -> Table {
    let mut table = Table::new(vec!["i", "j", "x", "y"]);
    for (i, line) in a.lines().iter().enumerate() {
        for (j, (x, y)) in line.iter().enumerate() {
            table.push(vec![i.into(), j.into(), x.into(), y.into()]);
        }
    }
    table
}

fn array(kind: ArrayKind, p: Option<&str>, m: usize, s: u32, exact: bool) -> Result<Output> {
    let need_p = || {
        p.ok_or_else(|| invalid("this array needs --p"))
            .and_then(probability)
    };
    let a = match kind {
        ArrayKind::Canonical => canonical_array(&need_p()?, m)?,
        ArrayKind::Transition => transition_array(m)?,
        ArrayKind::Family => family_array(&need_p()?, s, m)?,
    };
    Ok(Output::Both {
        json: json!({ "m": m, "lines": array_json(&a, exact) }),
        table: array_table(&a),
    })
}

fn orbit(
    x: &str,
    steps: usize,
    g: Option<&Path>,
    extend: Extend,
    p: &str,
    max_depth: usize,
    seed: u64,
) -> Result<Output> {
    if steps == 0 {
        return Err(invalid("steps must be positive"));
    }
    let x = Point::parse_binary(x)?;
    let extension = match extend {
        Extend::Fixed => Extension::Fixed,
        Extend::Zeros => Extension::Zeros { max_depth },
        Extend::Bernoulli => Extension::Bernoulli {
            p: probability(p)?,
            seed,
            max_depth,
        },
    };
    let g = match g {
        Some(path) => read_g(path)?,
        None => DyadicFunction::ab_indicator(),
    };
    let letters = orbit_letters(&x, steps, &extension)?;
    let sums = orbit_sums(&g, &x, steps, &extension)?;
    let mut table = Table::new(vec!["j", "letter", "sum"]);
    for (j, s) in sums.iter().enumerate() {
        let letter = letters.get(j..j + 1).map_or(Cell::Empty, Cell::from);
        table.push(vec![j.into(), letter, s.into()]);
    }
    Ok(Output::Table(table))
}

fn towers(n: u32) -> Result<Output> {
    let towers = build_towers(n, DEFAULT_TOWER_CAP)?;
    let json = Value::Array(
        towers
            .iter()
            .map(|t| json!({ "k": t.k, "height": t.height(), "rungs": t.rungs }))
            .collect(),
    );
    let mut table = Table::new(vec!["k", "rung", "interval"]);
    for t in &towers {
        for (r, &idx) in t.rungs.iter().enumerate() {
            table.push(vec![t.k.into(), r.into(), Cell::Int(idx as i64)]);
        }
    }
    Ok(Output::Both { json, table })
}

fn poly(path: &Path, exact: bool) -> Result<Output> {
    let g = read_g(path)?;
    let pg = polynomial_pg(&g);
    if pg != covariance_pg(&g) {
        return Err(CliError::CheckFailed(
            "tower-sum and covariance forms of P^g disagree".into(),
        ));
    }
    let coeffs: Vec<String> = pg.coeffs().iter().map(|c| fmt_rational(c, exact)).collect();
    let mut table = Table::new(vec!["power", "coefficient"]);
    for (i, c) in pg.coeffs().iter().enumerate() {
        table.push(vec![i.into(), c.into()]);
    }
    Ok(Output::Both {
        json: json!({
            "level": g.level(),
            "coefficients": coeffs,
            "multiplicity_at_half": pg.root_multiplicity(&rat(1, 2)),
        }),
        table,
    })
}

fn cohomology(path: &Path, exact: bool) -> Result<Output> {
    let g = read_g(path)?;
    Ok(match cohomology_test(&g)? {
        Cohomology::Cohomologous { constant, transfer } => {
            let f: Vec<String> = transfer
                .values()
                .iter()
                .map(|v| fmt_rational(v, exact))
                .collect();
            Output::Text {
                text: format!(
                    "cohomologous\nC = {}\nf = [{}]\n",
                    fmt_rational(&constant, exact),
                    f.join(", ")
                ),
                json: Some(json!({
                    "cohomologous": true,
                    "constant": fmt_rational(&constant, exact),
                    "transfer": { "level": transfer.level(), "values": f },
                })),
            }
        }
        Cohomology::NotCohomologous => Output::Text {
            text: "not cohomologous\n".into(),
            json: Some(json!({ "cohomologous": false })),
        },
    })
}

fn conway(max: usize) -> Result<Output> {
    if max == 0 {
        return Err(invalid("--max must be positive"));
    }
    let seq = ConwaySeq::new(max);
    let v = seq.values();
    let mut table = Table::new(vec!["j", "C", "D"]);
    for j in 1..=max {
        let d = if j >= 3 {
            Cell::Int(2 * (v[j - 1] as i64 - v[j - 2] as i64) - 1)
        } else {
            Cell::Empty
        };
        table.push(vec![j.into(), Cell::Int(v[j - 1] as i64), d]);
    }
    Ok(Output::Table(table))
}

fn verify(lines: u32) -> Result<Report> {
    Ok(match verify_concatenation(lines)? {
        Ok(total) => Report::from(Output::Text {
            text: format!(
                "PASS: D(3..={}) spells the blocks of lines 1..={lines}\n",
                total + 2
            ),
            json: None,
        }),
        Err(m) => {
            let msg = format!(
                "FAIL: first mismatch at j = {} inside B({},{})",
                m.j,
                m.block.n(),
                m.block.k()
            );
            Report {
                output: Output::Text {
                    text: format!("{msg}\n"),
                    json: None,
                },
                failure: Some(msg),
            }
        }
    })
}

/// `||M_p||_inf`, from the exact values at the bounds of a deep canonical array.
fn mp_sup(p: &Rational) -> Result<f64> {
    Ok(to_f64(&canonical_array(p, 14)?.extrema().0))
}

fn converge(p: &str, n_list: &[u32], g: Option<&Path>, grid_bits: u32) -> Result<Output> {
    let p = probability(p)?;
    if n_list.is_empty() {
        return Err(invalid("--n-list is empty"));
    }
    if grid_bits > 16 {
        return Err(invalid("--grid-bits is limited to 16"));
    }
    let grid = dyadic_grid(grid_bits);
    let g = g.map(read_g).transpose()?;
    // target = sign * M_p / scale
    let (sign, scale) = match &g {
        None => (1.0, 1.0),
        Some(g) => {
            let s = polynomial_pg(g).sign_at(&p);
            if s == 0 {
                eprintln!("warning: P^g(p)=0: transition regime");
            }
            (s as f64, mp_sup(&p)?)
        }
    };
    let mut table = Table::new(vec!["n", "k", "distance", "ratio"]);
    for &n in n_list {
        let k = (&p * int(n as i64)).floor().to_integer();
        let k = k.to_i64().unwrap();
        let c = binomial_rational(n as u64, k);
        let target = |t: &Rational| eval_mp(&p, t, 1e-10).map(|v| sign * v / scale);
        let (distance, r) = match &g {
            None => {
                let id = BlockId::new(n as i64, k)?;
                let curve = BlockCurve::new(id)?;
                let d = sup_distance(|t| curve.eval(t).map(|v| to_f64(&v)), target, &grid)?;
                (Cell::Float(d), phi_denominator(id)?)
            }
            Some(g) => {
                let id = BlockId::generalized(g.level(), n as i64, k)?;
                let curve = GCurve::new(g, id, &RenormOptions::default())?;
                let d = if sign == 0.0 {
                    Cell::Empty
                } else {
                    Cell::Float(sup_distance(
                        |t| curve.eval(t).map(|v| to_f64(&v)),
                        target,
                        &grid,
                    )?)
                };
                (d, curve.renorm().value.clone())
            }
        };
        table.push(vec![
            n.into(),
            Cell::Int(k),
            distance,
            Cell::Float(to_f64(&(r * int(n as i64) / c))),
        ]);
    }
    Ok(Output::Table(table))
}

fn figure(name: FigureName) -> Result<Output> {
    Ok(Output::Table(match name {
        FigureName::Fig2 => {
            let id = BlockId::new(6, 3)?;
            let mut table = Table::new(vec!["l", "F"]);
            for l in 0..=20u32 {
                let f = eval_f(id, &BigUint::from(l))?;
                table.push(vec![l.into(), Cell::Int(f.to_i64().unwrap())]);
            }
            table
        }
        FigureName::Fig3 => {
            let mut table = Table::new(vec!["p", "t", "phi", "limit"]);
            for (p, n, k) in [(rat(1, 2), 200i64, 100i64), (rat(4, 5), 200, 160)] {
                let c = BlockCurve::new(BlockId::new(n, k)?)?;
                for t in dyadic_grid(10) {
                    let limit = eval_mp(&p, &t, 1e-10)?;
                    table.push(vec![
                        (&p).into(),
                        (&t).into(),
                        c.eval(&t)?.into(),
                        limit.into(),
                    ]);
                }
            }
            table
        }
        FigureName::Fig4 => {
            let p = rat(2, 5);
            let mut table = Table::new(vec!["stage", "t", "value"]);
            for m in 1..=4usize {
                for (t, v) in canonical_array(&p, m)?.breakpoints() {
                    table.push(vec![m.into(), t.into(), v.into()]);
                }
            }
            table
        }
        FigureName::Fig5 => array_table(&canonical_array(&rat(1, 2), 3)?),
        FigureName::Fig6 => {
            let a = transition_array(24)?;
            let mut table = Table::new(vec!["t", "value"]);
            for t in dyadic_grid(12) {
                let v = a.eval(&t)?;
                table.push(vec![t.into(), v.into()]);
            }
            table
        }
    }))
}

fn selftest(fault: Option<&[u64]>, timed: bool, seed: u64) -> Result<Report> {
    if let Some(fault) = fault {
        let &[n, k] = fault else {
            return Err(invalid("--inject-fault takes N,K"));
        };
        let table = binomial_table();
        if n > table.n_max() || k > n {
            return Err(invalid(format!(
                "fault position must satisfy k <= n <= {}",
                table.n_max()
            )));
        }
        table.inject_fault(n, k);
    }
    let reports = run_all(seed);
    let mut text = String::new();
    for r in &reports {
        text += &r.line(timed);
        text.push('\n');
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} ({})", r.id, r.name))
        .collect();
    text += &format!(
        "{} of {} checks passed\n",
        reports.len() - failed.len(),
        reports.len()
    );
    Ok(Report {
        output: Output::Text { text, json: None },
        failure: (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", "))),
    })
}
