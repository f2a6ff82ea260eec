//! Command-line surface for `ample-homology`: instance files in, JSON or
//! text reports out.
//!
//! Exit codes: 0 success, 1 validation findings or failed checks, 2 schema
//! and usage errors, 3 rank gates. Every non-zero exit also writes one JSON
//! error object to the error stream.

pub mod check;
pub mod output;
pub mod schema;

use std::ffi::OsString;
use std::io::Write;

use ample_homology::{
    cubical_homology_rank1, groupoid_homology, hk_report, ktheory, kunneth, orbit_oracle, product,
    single_vertex_closed_form, ActionError, Finding, HomologyProfile, KGraphError, KGraphSkeleton,
    ZkAction,
};
use clap::{Parser, Subcommand};
use serde::Serialize;

use check::{CheckConfig, CheckReport, PerfReport};
use output::{line, profile_text, ErrorJson, FindingJson, HkJson, ResultJson, ValidationJson};
use schema::{read_instance, write_kgraph, Instance, SchemaError};

pub const SEED_VAR: &str = "HOMOLOGY_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_RANK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ample-homology",
    version,
    about = "Exact homology of ample k-graph and Deaconu-Renault groupoids"
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report schema-valid instances that break the graph or action axioms.
    Validate { file: String },
    /// Groupoid homology H_0 .. H_k.
    Homology { file: String },
    /// K-theory of the k-graph C*-algebra (ranks 1 and 2).
    Ktheory {
        file: String,
        /// For k >= 3, report the even and odd homology sums, labelled conjectural.
        #[arg(long)]
        allow_conjectural: bool,
    },
    /// Closed form for a one-vertex k-graph, cross-checked against D^Λ.
    SingleVertex {
        /// Edge counts per colour, e.g. 3,5.
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<u64>,
    },
    /// Write the cartesian product of two k-graphs.
    Product {
        a: String,
        b: String,
        #[arg(short, long)]
        output: String,
    },
    /// Künneth prediction for a product, compared with the direct computation.
    Kunneth { a: String, b: String },
    /// Categorical homology of a 1-graph.
    Cubical { file: String },
    /// Homology, K-theory and the HK comparison.
    HkReport { file: String },
    /// Run the randomized verification net.
    Check {
        #[arg(long, default_value_t = check::DEFAULT_SEED)]
        seed: u64,
        /// Cases per randomized suite.
        #[arg(long)]
        cases: Option<usize>,
        /// Also time the 100-vertex rank-2 workload.
        #[arg(long)]
        perf: bool,
    },
}

/// A non-zero outcome: exit code plus the error object.
#[derive(Debug)]
struct Failure {
    code: i32,
    error: ErrorJson,
}

impl Failure {
    fn new(code: i32, error: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            error: ErrorJson {
                error,
                message: message.into(),
                findings: Vec::new(),
            },
        }
    }

    fn schema(message: impl Into<String>) -> Self {
        Self::new(EXIT_SCHEMA, "schema", message)
    }

    fn findings(message: impl Into<String>, findings: Vec<FindingJson>) -> Self {
        let mut f = Self::new(EXIT_FINDINGS, "validation", message);
        f.error.findings = findings;
        f
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        match e {
            SchemaError::Io { .. } => Self::new(EXIT_SCHEMA, "io", e.to_string()),
            _ => Self::schema(e.to_string()),
        }
    }
}

impl From<KGraphError> for Failure {
    fn from(e: KGraphError) -> Self {
        match &e {
            KGraphError::Invalid(findings) => {
                Self::findings(e.to_string(), findings.iter().map(finding_json).collect())
            }
            KGraphError::RankUnsupported { .. } => Self::new(
                EXIT_RANK,
                "rank_gate",
                format!("{e}; only ranks 1 and 2 are determined by homology (pass --allow-conjectural for the HK sums)"),
            ),
            KGraphError::HypothesisViolated { .. } => Self::new(EXIT_FINDINGS, "hypothesis", e.to_string()),
            KGraphError::ZeroRank | KGraphError::WrongMatrixCount { .. } | KGraphError::MatrixShape { .. } => {
                Self::schema(e.to_string())
            }
            KGraphError::Koszul(_) => Self::new(EXIT_FINDINGS, "validation", e.to_string()),
        }
    }
}

impl From<ActionError> for Failure {
    fn from(e: ActionError) -> Self {
        match &e {
            ActionError::WrongCount { .. } | ActionError::WrongLength { .. } => {
                Self::schema(e.to_string())
            }
            ActionError::NotBijective { .. } => Self::findings(
                e.to_string(),
                vec![FindingJson {
                    kind: "not_bijective",
                    message: e.to_string(),
                }],
            ),
            ActionError::NonCommuting(..) => Self::findings(
                e.to_string(),
                vec![FindingJson {
                    kind: "non_commuting",
                    message: e.to_string(),
                }],
            ),
            ActionError::Koszul(_) => Self::new(EXIT_FINDINGS, "validation", e.to_string()),
        }
    }
}

fn finding_json(f: &Finding) -> FindingJson {
    FindingJson {
        kind: f.kind(),
        message: f.to_string(),
    }
}

fn action(k: usize, points: usize, permutations: &[Vec<usize>]) -> Result<ZkAction, ActionError> {
    ZkAction::new(k, points, permutations.to_vec())
}

fn kgraph(path: &str, command: &str) -> Result<KGraphSkeleton, Failure> {
    match read_instance(path)? {
        Instance::KGraph(s) => Ok(s),
        other => Err(Failure::schema(format!(
            "{path}: `{command}` takes a kgraph instance, got {}",
            other.kind()
        ))),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let message = e.to_string();
            let f = Failure::new(EXIT_SCHEMA, "usage", message.trim_end());
            let _ = err.write_all(line(&f.error).as_bytes());
            return f.code;
        }
    };
    let mut session = Session {
        text: cli.text,
        out: String::new(),
    };
    let result = session.dispatch(cli.command);
    let _ = out.write_all(session.out.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = err.write_all(line(&f.error).as_bytes());
            f.code
        }
    }
}

struct Session {
    text: bool,
    out: String,
}

impl Session {
    fn emit<T: Serialize>(&mut self, json: &T, text: impl FnOnce() -> String) {
        if self.text {
            self.out.push_str(&text());
        } else {
            self.out.push_str(&line(json));
        }
    }

    fn emit_profile(&mut self, result: &ResultJson, h: &HomologyProfile) {
        let mut text = profile_text(&HomologyProfile::new(h.k, h.groups.clone()));
        for note in &result.notes {
            text.push_str(&format!("note: {note}\n"));
        }
        self.emit(result, || text);
    }

    fn dispatch(&mut self, command: Command) -> Result<i32, Failure> {
        match command {
            Command::Validate { file } => self.validate(&file),
            Command::Homology { file } => self.homology(&file),
            Command::Ktheory {
                file,
                allow_conjectural,
            } => self.ktheory(&file, allow_conjectural),
            Command::SingleVertex { edges } => self.single_vertex(&edges),
            Command::Product { a, b, output } => self.product(&a, &b, &output),
            Command::Kunneth { a, b } => self.kunneth(&a, &b),
            Command::Cubical { file } => {
                let s = kgraph(&file, "cubical")?;
                let h = cubical_homology_rank1(&s)?;
                self.emit_profile(&ResultJson::homology(&h), &h);
                Ok(EXIT_OK)
            }
            Command::HkReport { file } => {
                let s = kgraph(&file, "hk-report")?;
                let report = hk_report(&s)?;
                self.emit(&HkJson::from(&report), || report.to_string());
                Ok(EXIT_OK)
            }
            Command::Check { seed, cases, perf } => self.check(seed, cases, perf),
        }
    }

    fn validate(&mut self, path: &str) -> Result<i32, Failure> {
        let instance = read_instance(path)?;
        let findings: Vec<FindingJson> = match &instance {
            Instance::KGraph(s) => s.validate().iter().map(finding_json).collect(),
            Instance::ZkAction {
                k,
                points,
                permutations,
            } => match action(*k, *points, permutations) {
                Ok(_) => Vec::new(),
                Err(e) => Failure::from(e).error.findings,
            },
        };
        let report = ValidationJson {
            kind: instance.kind(),
            k: instance.k(),
            valid: findings.is_empty(),
            findings,
        };
        self.emit(&report, || {
            let mut t = format!(
                "{}: {} (k = {})\n",
                path,
                if report.valid { "valid" } else { "invalid" },
                report.k
            );
            for f in &report.findings {
                t.push_str(&format!("  {}: {}\n", f.kind, f.message));
            }
            t
        });
        if report.valid {
            Ok(EXIT_OK)
        } else {
            Err(Failure::findings(
                format!("{path}: {} finding(s)", report.findings.len()),
                report.findings.clone(),
            ))
        }
    }

    fn homology(&mut self, path: &str) -> Result<i32, Failure> {
        let h = match read_instance(path)? {
            Instance::KGraph(s) => groupoid_homology(&s)?,
            Instance::ZkAction {
                k,
                points,
                permutations,
            } => {
                let a = action(k, points, &permutations)?;
                let h = a.homology()?;
                let oracle = orbit_oracle(&a);
                let check = if h.same_groups(&oracle) {
                    "agrees with the orbit decomposition"
                } else {
                    "DISAGREES with the orbit decomposition"
                };
                h.with_note(format!("{} orbit(s); {check}", a.orbits().len()))
            }
        };
        self.emit_profile(&ResultJson::homology(&h), &h);
        Ok(EXIT_OK)
    }

    fn ktheory(&mut self, path: &str, allow_conjectural: bool) -> Result<i32, Failure> {
        let s = kgraph(path, "ktheory")?;
        let kt = ktheory(&s, allow_conjectural)?;
        let h = groupoid_homology(&s)?;
        let mut result = ResultJson::homology(&h).with_ktheory(&kt);
        if s.k() >= 3 {
            result = result
                .note("K-groups for k >= 3 are the HK sums of homology, which is conjectural");
        }
        let text = || {
            let mut t = profile_text(&h);
            t.push_str(&format!(
                "K_0 = {}\nK_1 = {}\nmethod: {} ({})\n",
                kt.k0,
                kt.k1,
                kt.method.tag(),
                kt.hk_status.tag()
            ));
            t
        };
        self.emit(&result, text);
        Ok(EXIT_OK)
    }

    fn single_vertex(&mut self, edges: &[u64]) -> Result<i32, Failure> {
        let closed = single_vertex_closed_form(edges)?;
        let s = KGraphSkeleton::single_vertex(edges)?;
        let direct = groupoid_homology(&s)?;
        let g = edges.iter().map(|n| n - 1).fold(0, gcd);
        let agrees = direct.same_groups(&closed);
        let result = ResultJson::homology(&closed)
            .note(format!(
                "closed form: H_n = (Z_{g})^binom({}, n) for n < {}, H_{} = 0",
                edges.len() - 1,
                edges.len(),
                edges.len()
            ))
            .note(if agrees {
                "cross-check: agrees with the homology of D^Λ".to_string()
            } else {
                format!("cross-check: D^Λ gives {direct}")
            });
        self.emit_profile(&result, &closed);
        if agrees {
            Ok(EXIT_OK)
        } else {
            Err(Failure::findings(
                format!("closed form {closed} differs from D^Λ {direct}"),
                Vec::new(),
            ))
        }
    }

    fn product(&mut self, a: &str, b: &str, output: &str) -> Result<i32, Failure> {
        let p = product(&kgraph(a, "product")?, &kgraph(b, "product")?);
        std::fs::write(output, write_kgraph(&p))
            .map_err(|e| Failure::new(EXIT_SCHEMA, "io", format!("{output}: {e}")))?;
        #[derive(Serialize)]
        struct Written<'a> {
            output: &'a str,
            k: usize,
            vertices: usize,
        }
        let written = Written {
            output,
            k: p.k(),
            vertices: p.vertices().len(),
        };
        self.emit(&written, || {
            format!(
                "wrote {output}: k = {}, {} vertices\n",
                written.k, written.vertices
            )
        });
        Ok(EXIT_OK)
    }

    fn kunneth(&mut self, a: &str, b: &str) -> Result<i32, Failure> {
        let (ha, hb, hp) = match (read_instance(a)?, read_instance(b)?) {
            (Instance::KGraph(x), Instance::KGraph(y)) => (
                groupoid_homology(&x)?,
                groupoid_homology(&y)?,
                groupoid_homology(&product(&x, &y))?,
            ),
            (
                Instance::ZkAction {
                    k: kx,
                    points: px,
                    permutations: sx,
                },
                Instance::ZkAction {
                    k: ky,
                    points: py,
                    permutations: sy,
                },
            ) => {
                let x = action(kx, px, &sx)?;
                let y = action(ky, py, &sy)?;
                let xy = product_action(&x, &y)?;
                (x.homology()?, y.homology()?, xy.homology()?)
            }
            (x, y) => {
                return Err(Failure::schema(format!(
                    "`kunneth` needs two instances of the same kind, got {} and {}",
                    x.kind(),
                    y.kind()
                )))
            }
        };
        let predicted = kunneth(&ha, &hb);
        let agrees = predicted.same_groups(&hp);
        let result = ResultJson::homology(&predicted).note(if agrees {
            "agrees with the direct computation on the product".to_string()
        } else {
            format!("direct computation on the product gives {hp}")
        });
        self.emit_profile(&result, &predicted);
        if agrees {
            Ok(EXIT_OK)
        } else {
            Err(Failure::findings(
                format!("Künneth predicts {predicted}, product has {hp}"),
                vec![FindingJson {
                    kind: "kunneth_mismatch",
                    message: format!("predicted {predicted}; direct {hp}"),
                }],
            ))
        }
    }

    fn check(&mut self, seed: u64, cases: Option<usize>, perf: bool) -> Result<i32, Failure> {
        let seed = match std::env::var(SEED_VAR) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Failure::schema(format!("{SEED_VAR}={v:?} is not an unsigned integer"))
            })?,
            Err(_) => seed,
        };
        let report = check::run_checks(CheckConfig { seed, cases });
        let perf = if perf {
            Some(check::run_perf(seed).map_err(|e| Failure::new(EXIT_FINDINGS, "perf", e))?)
        } else {
            None
        };
        #[derive(Serialize)]
        struct CheckJson<'a> {
            #[serde(flatten)]
            report: &'a CheckReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            perf: Option<&'a PerfReport>,
        }
        let passed = report.passed && perf.as_ref().is_none_or(PerfReport::passed);
        self.emit(
            &CheckJson {
                report: &report,
                perf: perf.as_ref(),
            },
            || check_text(&report, perf.as_ref()),
        );
        if passed {
            Ok(EXIT_OK)
        } else {
            Err(Failure::new(EXIT_FINDINGS, "check", "some checks failed"))
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The product action of `ℤ^{k_x} × ℤ^{k_y}` on `X × Y`, point `(x, y)` at
/// index `x * |Y| + y`.
pub fn product_action(x: &ZkAction, y: &ZkAction) -> Result<ZkAction, ActionError> {
    let (px, py) = (x.points(), y.points());
    let mut perms = Vec::with_capacity(x.k() + y.k());
    for s in x.perms() {
        perms.push((0..px * py).map(|i| s[i / py] * py + i % py).collect());
    }
    for t in y.perms() {
        perms.push((0..px * py).map(|i| (i / py) * py + t[i % py]).collect());
    }
    ZkAction::new(x.k() + y.k(), px * py, perms)
}

fn check_text(report: &CheckReport, perf: Option<&PerfReport>) -> String {
    let mut t = format!("seed {}\n", report.seed);
    for s in &report.suites {
        t.push_str(&format!(
            "{} {} ({} checks)\n",
            if s.passed() { "PASS" } else { "FAIL" },
            s.name,
            s.cases
        ));
        for f in &s.failures {
            t.push_str(&format!("  {f}\n"));
        }
    }
    if let Some(p) = perf {
        t.push_str(&format!(
            "{} perf: {} vertices, k = {}, {:.2} s, peak Smith growth {:.2}x per reduction ({:.2}x of the skeleton's {}-bit entries)\n",
            if p.passed() { "PASS" } else { "FAIL" },
            p.vertices,
            p.k,
            p.seconds,
            p.peak_ratio,
            p.skeleton_ratio,
            p.skeleton_bits
        ));
        for m in &p.snf_invocations {
            let shape = m
                .shape
                .map(|(r, c)| format!(" {r}x{c}"))
                .unwrap_or_default();
            t.push_str(&format!(
                "  {}{shape}: {} -> {} bits ({:.2}x)\n",
                m.matrix, m.input_bits, m.peak_bits, m.ratio
            ));
        }
        t.push_str(&format!(
            "  Hermite peak {} bits (kernel basis, transform included); homology {}\n",
            p.hermite_peak_bits, p.homology
        ));
    }
    t
}
