use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lefschetz::exact::to_fraction_string;
use lefschetz::invariants::{
    degree_invariant, extract_descendants, multiple_cover_applicable, multiple_cover_inverse,
    run_pipeline, serre_dual_pair, serre_report,
};
use lefschetz::mirror::{apply_transform, solve_mirror_map};
use lefschetz::oracle::oracle_n_d;
use lefschetz::serial::{self, InvariantRowJson, OracleReportJson};
use lefschetz::twist::{check_conditions, i_function};
use lefschetz::{CurveClass, Error, GeometrySpec, QSeries, Q};
use serde::Serialize;

use crate::{Command, Format};

pub struct RunConfig {
    pub geometry: PathBuf,
    pub command: Command,
    pub max_degree: u32,
    pub format: Format,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

pub enum Failure {
    Domain(Error),
    Mismatch(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Outcome<T> {
    serde_json::from_str(text).map_err(|e| Failure::Domain(Error::Parse(e.to_string())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn beta_str(beta: &[u32]) -> String {
    beta.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn emit(config: &RunConfig, body: &str) -> Outcome<()> {
    match &config.out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
            let name = match config.command {
                Command::Check => "check",
                Command::Ifun => "ifun",
                Command::MirrorMap => "mirror-map",
                Command::Invariants => "invariants",
                Command::Serre => "serre",
                Command::Oracle => "oracle",
                Command::Verify => "verify",
            };
            let ext = match config.format {
                Format::Json => "json",
                Format::Tsv => "tsv",
            };
            let path = dir.join(format!("{name}.{ext}"));
            fs::write(&path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome<()> {
    let geometry = serial::parse_geometry(&read(&config.geometry)?)?;
    let d = config.max_degree;
    match config.command {
        Command::Check => check(config, &geometry),
        Command::Ifun => {
            let series = i_function(&geometry, d)?;
            emit(config, &series_body(config.format, &series))
        }
        Command::MirrorMap => mirror_map(config, &geometry),
        Command::Invariants => invariants(config, &geometry),
        Command::Serre => serre(config, &geometry),
        Command::Oracle => oracle(config, &geometry),
        Command::Verify => verify(config, &geometry),
    }
}

fn check(config: &RunConfig, g: &GeometrySpec) -> Outcome<()> {
    let report = check_conditions(g);
    let body = match config.format {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut s = String::from("factor\tr\ttheorem1_combination\ttheorem1_nonneg\tconvex_index\n");
            for (i, r) in g.ambient().factors().iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{i}\t{r}\t{}\t{}\t{}",
                    report.theorem1_combination[i], report.theorem1_nonneg[i], report.convex_index[i]
                );
            }
            let _ = writeln!(s, "theorem2_case\t{:?}", report.theorem2_case);
            s
        }
    };
    emit(config, &body)
}

fn series_body(format: Format, s: &QSeries) -> String {
    match format {
        Format::Json => to_json(&serial::qseries_to_json(s)),
        Format::Tsv => {
            let mut out = String::from("beta\tpow\texp\tcoeff\n");
            for term in serial::qseries_to_json(s).terms {
                for h in &term.hbar {
                    for c in &h.class {
                        let _ = writeln!(out, "{}\t{}\t{}\t{}", beta_str(&term.beta), h.pow, beta_str(&c.exp), c.coeff);
                    }
                }
            }
            out
        }
    }
}

fn load_i_series(config: &RunConfig, g: &GeometrySpec) -> Outcome<QSeries> {
    match &config.input {
        None => Ok(i_function(g, config.max_degree)?),
        Some(path) => {
            let dump: serial::QSeriesJson = parse_json(&read(path)?)?;
            let s = serial::qseries_from_json(g.ambient(), &dump)?;
            if s.max_degree() < config.max_degree {
                return Err(Error::TruncationMismatch {
                    left: config.max_degree,
                    right: s.max_degree(),
                }
                .into());
            }
            Ok(s.truncate(config.max_degree))
        }
    }
}

fn mirror_map(config: &RunConfig, g: &GeometrySpec) -> Outcome<()> {
    let series = load_i_series(config, g)?;
    let map = solve_mirror_map(&series, &g.constant_class())?;
    let body = match config.format {
        Format::Json => to_json(&serial::map_to_json(&map)),
        Format::Tsv => {
            let mut s = String::from("series\tbeta\tcoeff\n");
            let j = serial::map_to_json(&map);
            for c in &j.f0 {
                let _ = writeln!(s, "f0\t{}\t{}", beta_str(&c.beta), c.coeff);
            }
            for (i, f) in j.f1.iter().enumerate() {
                for c in f {
                    let _ = writeln!(s, "f1_{}\t{}\t{}", i + 1, beta_str(&c.beta), c.coeff);
                }
            }
            s
        }
    };
    emit(config, &body)
}

fn numbers(config: &RunConfig, g: &GeometrySpec) -> Outcome<Vec<(CurveClass, Q)>> {
    let d = config.max_degree;
    match &config.input {
        None => Ok(run_pipeline(g, d)?.numbers),
        Some(path) => {
            let dump: serial::MirrorMapJson = parse_json(&read(path)?)?;
            let n = g.ambient().n_factors();
            let map = serial::map_from_json(n, d, &dump)?;
            let normalized = apply_transform(&i_function(g, d)?, &map)?;
            extract_descendants(&normalized)?;
            Ok(CurveClass::up_to(n, d)
                .into_iter()
                .filter(|b| !b.is_zero())
                .map(|b| {
                    let v = degree_invariant(&normalized, &b);
                    (b, v)
                })
                .collect())
        }
    }
}

fn invariants(config: &RunConfig, g: &GeometrySpec) -> Outcome<()> {
    let nums = numbers(config, g)?;
    let small_n = multiple_cover_applicable(g)
        .ok()
        .map(|_| multiple_cover_inverse(&nums.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>()));
    let rows: Vec<InvariantRowJson> = nums
        .iter()
        .enumerate()
        .map(|(k, (beta, v))| InvariantRowJson {
            beta: beta.0.clone(),
            big_n: to_fraction_string(v),
            n: small_n.as_ref().map(|n| to_fraction_string(&n[k])),
        })
        .collect();
    let body = match config.format {
        Format::Json => to_json(&rows),
        Format::Tsv => {
            let mut s = String::from("degree\tN_d\tn_d\n");
            for r in &rows {
                let _ = writeln!(s, "{}\t{}\t{}", beta_str(&r.beta), r.big_n, r.n.as_deref().unwrap_or("-"));
            }
            s
        }
    };
    emit(config, &body)
}

fn serre(config: &RunConfig, g: &GeometrySpec) -> Outcome<()> {
    let pair = serre_dual_pair(g, config.max_degree)?;
    let report = serre_report(&pair)?;
    let json = serial::serre_to_json(pair.sign, &report);
    let body = match config.format {
        Format::Json => to_json(&json),
        Format::Tsv => {
            let mut s = String::new();
            let _ = writeln!(s, "sign\t{}", json.sign);
            let _ = writeln!(s, "solved\t{}", json.solved);
            let _ = writeln!(s, "obstructed\t{}", json.obstructed.as_deref().map(beta_str).unwrap_or_else(|| "-".into()));
            for c in &json.phi {
                let _ = writeln!(s, "phi\t{}\t{}", beta_str(&c.beta), c.coeff);
            }
            for (i, f) in json.map.f1.iter().enumerate() {
                for c in f {
                    let _ = writeln!(s, "f1_{}\t{}\t{}", i + 1, beta_str(&c.beta), c.coeff);
                }
            }
            for t in &json.residual.terms {
                for h in &t.hbar {
                    for c in &h.class {
                        let _ = writeln!(s, "residual\t{}\t{}\t{}\t{}", beta_str(&t.beta), h.pow, beta_str(&c.exp), c.coeff);
                    }
                }
            }
            s
        }
    };
    emit(config, &body)?;
    match &report.obstructed {
        None => Ok(()),
        Some(beta) => Err(Error::Infeasible {
            beta: beta.0.clone(),
            residual: report.residual.coeff(beta).to_string(),
        }
        .into()),
    }
}

fn single_factor(g: &GeometrySpec) -> Outcome<u32> {
    match g.ambient().factors() {
        [r] => Ok(*r),
        _ => Err(Error::Unsupported("localization runs on a single projective space".into()).into()),
    }
}

fn oracle_reports(config: &RunConfig, g: &GeometrySpec) -> Outcome<Vec<OracleReportJson>> {
    let r = single_factor(g)?;
    let mut out = Vec::new();
    for d in 1..=config.max_degree.min(2) {
        let run = oracle_n_d(r, d, g.bundle(), config.seed)?;
        out.push(OracleReportJson {
            geometry: serial::geometry_to_json(g),
            d,
            value: to_fraction_string(&run.value),
            weights_used: run.weights_used,
            graphs_evaluated: run.graphs_evaluated,
        });
    }
    Ok(out)
}

fn oracle(config: &RunConfig, g: &GeometrySpec) -> Outcome<()> {
    let reports = oracle_reports(config, g)?;
    let body = match config.format {
        Format::Json => to_json(&reports),
        Format::Tsv => {
            let mut s = String::from("d\tvalue\tweights\tgraphs\n");
            for r in &reports {
                let w = r.weights_used.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                let _ = writeln!(s, "{}\t{}\t{}\t{}", r.d, r.value, w, r.graphs_evaluated);
            }
            s
        }
    };
    emit(config, &body)
}

#[derive(Serialize)]
struct VerifyRow {
    d: u32,
    pipeline: String,
    oracle: String,
    status: &'static str,
}

#[derive(Serialize)]
struct VerifyReport {
    status: &'static str,
    rows: Vec<VerifyRow>,
}

fn verify(config: &RunConfig, g: &GeometrySpec) -> Outcome<()> {
    single_factor(g)?;
    let nums = numbers(config, g)?;
    let reports = oracle_reports(config, g)?;
    let rows: Vec<VerifyRow> = reports
        .iter()
        .map(|o| {
            let pipeline = to_fraction_string(&nums[o.d as usize - 1].1);
            let status = if pipeline == o.value { "MATCH" } else { "MISMATCH" };
            VerifyRow {
                d: o.d,
                pipeline,
                oracle: o.value.clone(),
                status,
            }
        })
        .collect();
    let status = if rows.iter().all(|r| r.status == "MATCH") { "MATCH" } else { "MISMATCH" };
    let report = VerifyReport { status, rows };
    let body = match config.format {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut s = String::from("d\tpipeline\toracle\tstatus\n");
            for r in &report.rows {
                let _ = writeln!(s, "{}\t{}\t{}\t{}", r.d, r.pipeline, r.oracle, r.status);
            }
            let _ = writeln!(s, "{status}");
            s
        }
    };
    emit(config, &body)?;
    if status == "MATCH" {
        Ok(())
    } else {
        Err(Failure::Mismatch("pipeline and localization disagree".into()))
    }
}
