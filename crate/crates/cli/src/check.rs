//! The randomized verification net behind `check`.
//!
//! Every complex and profile the net computes also passes through the
//! structural audits: `∂∘∂ = 0`, the shift identity on each cycle-basis
//! vector, the Euler characteristic, and for rank 2 the K-theory wiring.
//! Sampling only draws from fixed-width integer ranges, so a seed gives the
//! same net on every platform.

use std::time::{Duration, Instant};

use ample_homology::koszul::{binomial, free_profile, DegreeStats};
use ample_homology::linalg::{invariant_factors_with_stats, snf_certified};
use ample_homology::{
    cubical_homology_rank1, groupoid_homology, ktheory, kunneth, orbit_oracle, product,
    single_vertex_closed_form, BigInt, FgAbGroup, HomologyProfile, IntMatrix, KGraphSkeleton,
    KoszulComplex, Matrix, SmithStats, ZkAction,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    /// Overrides the per-suite case counts.
    pub cases: Option<usize>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            cases: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl CheckReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// The audits shared by every suite.
struct Net {
    rng: ChaCha8Rng,
    reduction: SuiteReport,
    euler: SuiteReport,
    rank2: SuiteReport,
}

impl Net {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            reduction: SuiteReport::new("reduction"),
            euler: SuiteReport::new("euler"),
            rank2: SuiteReport::new("rank2_wiring"),
        }
    }

    fn audit_complex(&mut self, label: &str, c: &KoszulComplex) {
        let k = c.k();
        for p in 1..=k + 1 {
            let square = c.boundary(p - 1).mul(&c.boundary(p));
            self.reduction.record(square.is_zero(), || {
                format!("{label}: d_{} d_{p} != 0", p - 1)
            });
        }
        for p in 0..=k {
            let z = c.cycles(p);
            let samples: Vec<Vec<BigInt>> = (0..z.cols()).map(|j| z.column(j)).collect();
            for i in 0..k {
                let ok = c.verify_shift_identity(i, p, &samples);
                self.reduction.record(matches!(ok, Ok(true)), || {
                    format!(
                        "{label}: shift {} fails on degree {p} cycles ({ok:?})",
                        i + 1
                    )
                });
            }
        }
    }

    fn audit_profile(&mut self, label: &str, h: &HomologyProfile) {
        if h.k >= 1 {
            let chi = h.euler_characteristic();
            self.euler.record(chi == 0, || {
                format!("{label}: Euler characteristic {chi} for {h}")
            });
        }
    }

    fn complex_homology(&mut self, label: &str, c: &KoszulComplex) -> Option<HomologyProfile> {
        self.audit_complex(label, c);
        match c.homology() {
            Ok(h) => {
                self.audit_profile(label, &h);
                Some(h)
            }
            Err(e) => {
                self.reduction.record(false, || format!("{label}: {e}"));
                None
            }
        }
    }

    /// Groupoid homology of a valid skeleton, with all audits applied.
    fn kgraph_homology(
        &mut self,
        label: &str,
        s: &KGraphSkeleton,
    ) -> Result<HomologyProfile, String> {
        let c = s.evans_complex().map_err(|e| format!("{label}: {e}"))?;
        let h = self
            .complex_homology(label, &c)
            .ok_or_else(|| format!("{label}: homology failed"))?;
        if s.k() == 2 {
            let expected = (h.groups[0].direct_sum(&h.groups[2]), h.groups[1].clone());
            match ktheory(s, false) {
                Ok(kt) => self
                    .rank2
                    .record((kt.k0.clone(), kt.k1.clone()) == expected, || {
                        format!(
                            "{label}: K-theory ({}, {}) but H_0 (+) H_2 = {}, H_1 = {}",
                            kt.k0, kt.k1, expected.0, expected.1
                        )
                    }),
                Err(e) => self.rank2.record(false, || format!("{label}: {e}")),
            }
        }
        Ok(h)
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn index(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo as u32..=hi as u32) as usize
    }
}

/// The fixed reproductions and every randomized suite, in a fixed order.
pub fn run_checks(cfg: CheckConfig) -> CheckReport {
    run_checks_timed(cfg).0
}

/// As [`run_checks`], with the wall time of each suite that has its own
/// cases. Timings are kept out of the report so that it stays reproducible.
pub fn run_checks_timed(cfg: CheckConfig) -> (CheckReport, Vec<(&'static str, Duration)>) {
    let n = |default: usize| cfg.cases.unwrap_or(default);
    let mut net = Net::new(cfg.seed);
    let mut suites = Vec::new();
    let mut timings = Vec::new();
    let mut timed = |net: &mut Net, f: &dyn Fn(&mut Net) -> SuiteReport| {
        let started = Instant::now();
        let report = f(net);
        timings.push((report.name, started.elapsed()));
        suites.push(report);
    };
    timed(&mut net, &worked_example);
    timed(&mut net, &cuntz_o2);
    timed(&mut net, &|net| single_vertex_suite(net, n(200)));
    timed(&mut net, &|net| kunneth_suite(net, n(50)));
    timed(&mut net, &|net| commuting_family_suite(net, n(100)));
    timed(&mut net, &|net| orbit_suite(net, n(100)));
    timed(&mut net, &|net| snf_suite(net, n(500)));
    suites.extend([net.reduction, net.euler, net.rank2]);
    let report = CheckReport {
        seed: cfg.seed,
        passed: suites.iter().all(SuiteReport::passed),
        suites,
    };
    (report, timings)
}

/// The two-vertex graph with vertex matrix `[[5, 2], [2, 3]]`.
pub fn example_graph() -> KGraphSkeleton {
    KGraphSkeleton::from_matrices(vec![IntMatrix::from_i64_rows(&[[5, 2], [2, 3]])])
        .expect("square")
}

fn worked_example(net: &mut Net) -> SuiteReport {
    let mut suite = SuiteReport::new("worked_example");
    let s = example_graph();
    match net.kgraph_homology("example graph", &s) {
        Ok(h) => {
            let expected = vec![FgAbGroup::torsion_only(vec![2, 2]), FgAbGroup::trivial()];
            suite.record(h.groups == expected, || format!("groupoid homology {h}"));
        }
        Err(e) => suite.record(false, || e),
    }
    match cubical_homology_rank1(&s) {
        Ok(h) => {
            let expected = vec![FgAbGroup::free(1), FgAbGroup::free(11)];
            suite.record(h.groups == expected, || format!("cubical homology {h}"));
        }
        Err(e) => suite.record(false, || e.to_string()),
    }
    suite
}

fn cuntz_o2(net: &mut Net) -> SuiteReport {
    let mut suite = SuiteReport::new("o2");
    let s = KGraphSkeleton::single_vertex(&[2]).expect("1x1");
    match net.kgraph_homology("O_2", &s) {
        Ok(h) => suite.record(h.is_trivial(), || format!("homology {h}")),
        Err(e) => suite.record(false, || e),
    }
    match ktheory(&s, false) {
        Ok(kt) => suite.record(kt.k0.is_trivial() && kt.k1.is_trivial(), || {
            format!("K_0 = {}, K_1 = {}", kt.k0, kt.k1)
        }),
        Err(e) => suite.record(false, || e.to_string()),
    }
    suite
}

fn single_vertex_suite(net: &mut Net, cases: usize) -> SuiteReport {
    let mut suite = SuiteReport::new("single_vertex");
    for case in 0..cases {
        let k = net.index(1, 4);
        let counts: Vec<u64> = (0..k).map(|_| net.int(2, 7) as u64).collect();
        let label = format!("single vertex {counts:?}");
        let s = KGraphSkeleton::single_vertex(&counts).expect("1x1");
        let direct = net.kgraph_homology(&label, &s);
        let closed = single_vertex_closed_form(&counts).map_err(|e| e.to_string());
        match (direct, closed) {
            (Ok(d), Ok(c)) => suite.record(d.same_groups(&c), || {
                format!("case {case}, {label}: D^Λ gives {d}, closed form {c}")
            }),
            (Err(e), _) | (_, Err(e)) => suite.record(false, || format!("case {case}: {e}")),
        }
    }
    suite
}

/// A sourceless rank-1 or rank-2 skeleton on at most `max_n` vertices with
/// entries in `0..=bound`. Rank-2 pairs are `A` and a non-negative
/// polynomial in `A`.
fn random_skeleton(net: &mut Net, max_n: usize, max_k: usize, bound: i64) -> KGraphSkeleton {
    let n = net.index(1, max_n);
    let k = net.index(1, max_k);
    let a = random_sourceless(net, n, bound);
    let mut matrices = vec![a.clone()];
    if k == 2 {
        let mut second = None;
        for _ in 0..32 {
            let c: Vec<i64> = (0..3).map(|_| net.int(0, 2)).collect();
            let a2 = a.mul(&a);
            let m = Matrix::identity(n)
                .scale(&BigInt::from(c[0]))
                .add(&a.scale(&BigInt::from(c[1])))
                .add(&a2.scale(&BigInt::from(c[2])));
            let fits = m.entries().iter().all(|x| x <= &BigInt::from(bound));
            if fits && !has_zero_row(&m) {
                second = Some(m);
                break;
            }
        }
        matrices.push(second.unwrap_or_else(|| Matrix::identity(n)));
    }
    KGraphSkeleton::from_matrices(matrices).expect("square")
}

fn has_zero_row(m: &IntMatrix) -> bool {
    (0..m.rows()).any(|r| m.row(r).iter().all(Zero::is_zero))
}

fn random_sourceless(net: &mut Net, n: usize, bound: i64) -> IntMatrix {
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let row: Vec<i64> = (0..n).map(|_| net.int(0, bound)).collect();
        if row.iter().any(|&x| x > 0) {
            rows.push(row);
        }
    }
    IntMatrix::from_i64_rows(&rows)
}

fn kunneth_suite(net: &mut Net, cases: usize) -> SuiteReport {
    let mut suite = SuiteReport::new("kunneth");
    for case in 0..cases {
        let a = random_skeleton(net, 3, 2, 3);
        let b = random_skeleton(net, 3, 2, 3);
        let p = product(&a, &b);
        let label = format!("kunneth case {case}");
        let ha = net.kgraph_homology(&format!("{label} left"), &a);
        let hb = net.kgraph_homology(&format!("{label} right"), &b);
        let hp = net.kgraph_homology(&format!("{label} product"), &p);
        match (ha, hb, hp) {
            (Ok(ha), Ok(hb), Ok(hp)) => {
                let composed = kunneth(&ha, &hb);
                suite.record(hp.same_groups(&composed), || {
                    format!(
                        "{label}: product of {:?} and {:?} has {hp}, Künneth gives {composed}",
                        a.matrices(),
                        b.matrices()
                    )
                });
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => suite.record(false, || e),
        }
    }
    suite
}

/// Integer (not necessarily non-negative) commuting families: polynomials
/// in one random matrix. These feed only the structural audits.
fn commuting_family_suite(net: &mut Net, cases: usize) -> SuiteReport {
    let mut suite = SuiteReport::new("commuting_families");
    for case in 0..cases {
        let m = net.index(1, 4);
        let k = net.index(1, 3);
        let rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..m).map(|_| net.int(-3, 3)).collect())
            .collect();
        let a = IntMatrix::from_i64_rows(&rows);
        let a2 = a.mul(&a);
        let endos: Vec<IntMatrix> = (0..k)
            .map(|_| {
                let c: Vec<i64> = (0..3).map(|_| net.int(-2, 2)).collect();
                Matrix::identity(m)
                    .scale(&BigInt::from(c[0]))
                    .add(&a.scale(&BigInt::from(c[1])))
                    .add(&a2.scale(&BigInt::from(c[2])))
            })
            .collect();
        let label = format!("commuting family {case}");
        match KoszulComplex::build(k, endos) {
            Ok(c) => {
                let h = net.complex_homology(&label, &c);
                let dual = c.homology_via_invariant_factors();
                suite.record(h.as_ref() == Some(&dual), || {
                    format!("{label}: cycle route {h:?} vs invariant-factor route {dual}")
                });
            }
            Err(e) => suite.record(false, || format!("{label}: {e}")),
        }
    }
    suite
}

/// Disjoint torus blocks `ℤ_a × ℤ_b`, each generator translating every
/// block independently, then shuffled by a random relabeling.
fn random_action(net: &mut Net, max_points: usize, k: usize) -> ZkAction {
    let target = net.index(1, max_points);
    let mut blocks = Vec::new();
    let mut used = 0;
    while used < target {
        let a = net.index(1, 4.min(target - used));
        let b = net.index(1, 3.min((target - used) / a));
        blocks.push((used, a, b));
        used += a * b;
    }
    let mut perms = vec![vec![0; used]; k];
    for perm in perms.iter_mut() {
        for &(start, a, b) in &blocks {
            let (r, s) = (net.index(0, a - 1), net.index(0, b - 1));
            for x in 0..a {
                for y in 0..b {
                    perm[start + x * b + y] = start + ((x + r) % a) * b + (y + s) % b;
                }
            }
        }
    }
    let mut relabel: Vec<usize> = (0..used).collect();
    for i in (1..used).rev() {
        let j = net.index(0, i);
        relabel.swap(i, j);
    }
    let shuffled = perms
        .iter()
        .map(|p| {
            let mut q = vec![0; used];
            for x in 0..used {
                q[relabel[x]] = relabel[p[x]];
            }
            q
        })
        .collect();
    ZkAction::new(k, used, shuffled).expect("translations commute")
}

fn orbit_suite(net: &mut Net, cases: usize) -> SuiteReport {
    let mut suite = SuiteReport::new("orbit");
    for k in 0..=5 {
        let a = ZkAction::point(k);
        let label = format!("point action k = {k}");
        let c = a.to_koszul().expect("point");
        let h = net.complex_homology(&label, &c);
        let expected = free_profile(k, 1);
        let ok = h.as_ref().is_some_and(|h| {
            h.same_groups(&expected)
                && (0..=k).all(|n| h.groups[n] == FgAbGroup::free(binomial(k, n)))
        });
        suite.record(ok, || format!("{label}: {h:?}"));
    }
    for case in 0..cases {
        let k = net.index(1, 3);
        let a = random_action(net, 12, k);
        let label = format!("action {case} ({} points, k = {k})", a.points());
        let c = a.to_koszul().expect("valid action");
        let h = net.complex_homology(&label, &c);
        let oracle = orbit_oracle(&a);
        suite.record(h.as_ref().is_some_and(|h| h.same_groups(&oracle)), || {
            format!("{label}: Koszul {h:?}, orbits {oracle}")
        });
    }
    suite
}

fn snf_suite(net: &mut Net, cases: usize) -> SuiteReport {
    let mut suite = SuiteReport::new("snf");
    for case in 0..cases {
        let rows = net.index(1, 50);
        let cols = net.index(1, 50);
        let style = net.index(0, 2);
        let a = random_snf_input(net, rows, cols, style);
        if let Err(why) = certify(&a) {
            suite.record(false, || {
                format!("case {case} ({rows}x{cols}, style {style}): {why}")
            });
        } else {
            suite.record(true, String::new);
        }
    }
    suite
}

/// Dense, sparse, or rank-deficient (rows repeated up to sign).
fn random_snf_input(net: &mut Net, rows: usize, cols: usize, style: usize) -> IntMatrix {
    let mut data: Vec<Vec<i64>> = Vec::with_capacity(rows);
    let base = net.index(1, rows.min(cols));
    for r in 0..rows {
        let row = match style {
            0 => (0..cols).map(|_| net.int(-100, 100)).collect(),
            1 => (0..cols)
                .map(|_| {
                    if net.int(0, 9) < 3 {
                        net.int(-100, 100)
                    } else {
                        0
                    }
                })
                .collect(),
            _ if r < base => (0..cols).map(|_| net.int(-100, 100)).collect(),
            _ => {
                let src = net.index(0, base - 1);
                let sign = if net.int(0, 1) == 0 { 1 } else { -1 };
                data[src].iter().map(|x| sign * x).collect()
            }
        };
        data.push(row);
    }
    IntMatrix::from_i64_rows(&data)
}

/// `U·A·V = D`, `U·U⁻¹ = V·V⁻¹ = I`, and the diagonal is a divisibility
/// chain of non-negative entries followed by zeros.
pub fn certify(a: &IntMatrix) -> Result<(), String> {
    let cert = snf_certified(a);
    let s = &cert.smith;
    if s.u.mul(a).mul(&s.v) != s.diagonal_matrix() {
        return Err("U A V != D".into());
    }
    if !s.u.mul(&cert.u_inv).is_identity() {
        return Err("U is not unimodular".into());
    }
    if !s.v.mul(&cert.v_inv).is_identity() {
        return Err("V is not unimodular".into());
    }
    let d = &s.d;
    if d.iter().any(Signed::is_negative) {
        return Err(format!("negative diagonal entry in {d:?}"));
    }
    if d[s.rank..].iter().any(|x| !x.is_zero()) || d[..s.rank].iter().any(Zero::is_zero) {
        return Err(format!("rank {} inconsistent with {d:?}", s.rank));
    }
    for w in d[..s.rank].windows(2) {
        if !(&w[1] % &w[0]).is_zero() {
            return Err(format!("{} does not divide {}", w[0], w[1]));
        }
    }
    Ok(())
}

/// Measurements for the 100-vertex rank-2 workload.
#[derive(Debug, Clone, Serialize)]
pub struct PerfReport {
    pub seed: u64,
    pub vertices: usize,
    pub k: usize,
    pub homology: String,
    pub kunneth_agrees: bool,
    pub seconds: f64,
    /// Bit length of the largest vertex-matrix entry.
    pub skeleton_bits: u64,
    pub snf_invocations: Vec<SnfMeasurement>,
    /// Largest peak/input ratio over all Smith reductions.
    pub peak_ratio: f64,
    /// Largest Smith working entry relative to the skeleton entries.
    pub skeleton_ratio: f64,
    pub hermite_peak_bits: u64,
    pub within_time: bool,
    pub within_growth: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SnfMeasurement {
    pub matrix: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<(usize, usize)>,
    pub input_bits: u64,
    pub peak_bits: u64,
    pub ratio: f64,
}

impl PerfReport {
    pub fn passed(&self) -> bool {
        self.within_time && self.within_growth
    }
}

pub const PERF_SECONDS: f64 = 60.0;
pub const PERF_GROWTH: f64 = 64.0;

/// The product of two random sourceless 10-vertex 1-graphs with entries in
/// `0..=9`: a rank-2 skeleton on 100 vertices.
pub fn perf_workload(seed: u64) -> (KGraphSkeleton, KGraphSkeleton, KGraphSkeleton) {
    let mut net = Net::new(seed);
    let a =
        KGraphSkeleton::from_matrices(vec![random_sourceless(&mut net, 10, 9)]).expect("square");
    let b =
        KGraphSkeleton::from_matrices(vec![random_sourceless(&mut net, 10, 9)]).expect("square");
    let p = product(&a, &b);
    (a, b, p)
}

pub fn run_perf(seed: u64) -> Result<PerfReport, String> {
    let (a, b, s) = perf_workload(seed);
    let c = s.evans_complex().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let (h, degrees) = c.homology_with_stats().map_err(|e| e.to_string())?;
    let seconds = started.elapsed().as_secs_f64();

    let ha = groupoid_homology(&a).map_err(|e| e.to_string())?;
    let hb = groupoid_homology(&b).map_err(|e| e.to_string())?;
    let kunneth_agrees = h.same_groups(&kunneth(&ha, &hb));

    let skeleton_bits = s
        .matrices()
        .iter()
        .map(IntMatrix::max_bit_len)
        .max()
        .unwrap_or(0);
    let mut snf_invocations: Vec<SnfMeasurement> = degrees
        .iter()
        .map(|d: &DegreeStats| {
            measurement(
                format!("boundary {} in cycle basis", d.degree + 1),
                &d.smith,
            )
        })
        .collect();
    for p in 0..=c.k() + 1 {
        let d = c.boundary(p);
        let (_, st) = invariant_factors_with_stats(&d);
        let mut m = measurement(format!("boundary {p}"), &st);
        m.shape = Some(d.shape());
        snf_invocations.push(m);
    }
    let sized = |m: &&SnfMeasurement| m.input_bits > 0;
    let peak_ratio = snf_invocations
        .iter()
        .filter(sized)
        .map(|m| m.ratio)
        .fold(0.0, f64::max);
    let peak = snf_invocations
        .iter()
        .map(|m| m.peak_bits)
        .max()
        .unwrap_or(0);
    let skeleton_ratio = peak as f64 / skeleton_bits.max(1) as f64;
    Ok(PerfReport {
        seed,
        vertices: s.vertices().len(),
        k: s.k(),
        homology: h.to_string(),
        kunneth_agrees,
        seconds,
        skeleton_bits,
        snf_invocations,
        peak_ratio,
        skeleton_ratio,
        hermite_peak_bits: degrees
            .iter()
            .map(|d| d.kernel_peak_bits)
            .max()
            .unwrap_or(0),
        within_time: seconds < PERF_SECONDS,
        within_growth: peak_ratio < PERF_GROWTH,
    })
}

fn measurement(matrix: String, st: &SmithStats) -> SnfMeasurement {
    SnfMeasurement {
        matrix,
        shape: None,
        input_bits: st.input_bits,
        peak_bits: st.peak_bits,
        ratio: st.peak_bits as f64 / st.input_bits.max(1) as f64,
    }
}
