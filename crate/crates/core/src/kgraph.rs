//! Finite k-graphs given by their vertex matrices, and the homology and
//! K-theory of their path groupoids.
//!
//! A skeleton records only the `k` commuting vertex matrices
//! `M_i[v][w] = |v Λ^{e_i} w|` (row = range, column = source). Groupoid
//! homology does not depend on the factorisation rules, so this is the whole
//! input. The homology is that of the Koszul complex on the transposes
//! `M_i^t`, which is Evans' complex `D^Λ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use crate::abelian::kunneth;
use crate::abelian::{FgAbGroup, HomologyProfile};
use crate::koszul::{binomial, KoszulError};
use crate::linalg::{cokernel, kernel_basis, rank, Matrix};
use crate::{IntMatrix, KoszulComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KGraphError {
    #[error("a k-graph needs rank k >= 1")]
    ZeroRank,
    #[error("expected {expected} vertex matrices, got {found}")]
    WrongMatrixCount { expected: usize, found: usize },
    #[error("vertex matrix {index} is {shape:?}, expected {n}x{n}")]
    MatrixShape {
        index: usize,
        shape: (usize, usize),
        n: usize,
    },
    #[error("skeleton fails validation: {}", render_findings(.0))]
    Invalid(Vec<Finding>),
    #[error("{operation} is not available for rank {k}")]
    RankUnsupported { operation: &'static str, k: usize },
    #[error("closed form needs at least two edges of each colour; colour {} has {count}", .colour + 1)]
    HypothesisViolated { colour: usize, count: u64 },
    #[error(transparent)]
    Koszul(#[from] KoszulError),
}

fn render_findings(findings: &[Finding]) -> String {
    findings
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// One violated skeleton invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    NegativeEntry {
        matrix: usize,
        row: usize,
        col: usize,
        value: BigInt,
    },
    NonCommuting {
        first: usize,
        second: usize,
    },
    /// Row `vertex` of `matrix` is zero: no edge of that colour has range
    /// `vertex`.
    Source {
        matrix: usize,
        vertex: usize,
    },
}

impl Finding {
    pub fn kind(&self) -> &'static str {
        match self {
            Finding::NegativeEntry { .. } => "negative_entry",
            Finding::NonCommuting { .. } => "non_commuting",
            Finding::Source { .. } => "source",
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::NegativeEntry {
                matrix,
                row,
                col,
                value,
            } => write!(
                f,
                "M_{} has negative entry {value} at ({row}, {col})",
                matrix + 1
            ),
            Finding::NonCommuting { first, second } => {
                write!(f, "M_{} and M_{} do not commute", first + 1, second + 1)
            }
            Finding::Source { matrix, vertex } => {
                write!(
                    f,
                    "vertex {vertex} receives no edge of colour {} (zero row)",
                    matrix + 1
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGraphSkeleton {
    k: usize,
    vertices: Vec<String>,
    matrices: Vec<IntMatrix>,
    allow_sources: bool,
}

impl KGraphSkeleton {
    /// Checks shapes only; the graph invariants are reported by
    /// [`KGraphSkeleton::validate`].
    pub fn new(vertices: Vec<String>, matrices: Vec<IntMatrix>) -> Result<Self, KGraphError> {
        let k = matrices.len();
        if k == 0 {
            return Err(KGraphError::ZeroRank);
        }
        let n = vertices.len();
        for (index, m) in matrices.iter().enumerate() {
            if m.shape() != (n, n) {
                return Err(KGraphError::MatrixShape {
                    index,
                    shape: m.shape(),
                    n,
                });
            }
        }
        Ok(Self {
            k,
            vertices,
            matrices,
            allow_sources: false,
        })
    }

    /// Vertices labelled `0, 1, …`.
    pub fn from_matrices(matrices: Vec<IntMatrix>) -> Result<Self, KGraphError> {
        let n = matrices.first().map_or(0, Matrix::rows);
        Self::new((0..n).map(|v| v.to_string()).collect(), matrices)
    }

    /// One vertex with `edge_counts[i]` loops of colour `i`.
    pub fn single_vertex(edge_counts: &[u64]) -> Result<Self, KGraphError> {
        let matrices = edge_counts
            .iter()
            .map(|&n| Matrix::from_rows(vec![vec![BigInt::from(n)]]).expect("1x1"))
            .collect();
        Self::new(vec!["v".to_string()], matrices)
    }

    pub fn with_allow_sources(mut self, allow: bool) -> Self {
        self.allow_sources = allow;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn allow_sources(&self) -> bool {
        self.allow_sources
    }

    /// All violations, sources included even when they are allowed.
    pub fn findings(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        for (i, m) in self.matrices.iter().enumerate() {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if m.get(r, c).is_negative() {
                        out.push(Finding::NegativeEntry {
                            matrix: i,
                            row: r,
                            col: c,
                            value: m.get(r, c).clone(),
                        });
                    }
                }
            }
        }
        for i in 0..self.k {
            for j in i + 1..self.k {
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                if a.mul(b) != b.mul(a) {
                    out.push(Finding::NonCommuting {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        for (i, m) in self.matrices.iter().enumerate() {
            for v in 0..m.rows() {
                if !m.row(v).iter().any(Signed::is_positive) {
                    out.push(Finding::Source {
                        matrix: i,
                        vertex: v,
                    });
                }
            }
        }
        out
    }

    /// Violations that block computation: sources are dropped when the
    /// override flag is set.
    pub fn validate(&self) -> Vec<Finding> {
        let mut out = self.findings();
        if self.allow_sources {
            out.retain(|f| !matches!(f, Finding::Source { .. }));
        }
        out
    }

    pub fn has_sources(&self) -> bool {
        self.findings()
            .iter()
            .any(|f| matches!(f, Finding::Source { .. }))
    }

    fn ensure_valid(&self) -> Result<(), KGraphError> {
        let findings = self.validate();
        if findings.is_empty() {
            Ok(())
        } else {
            Err(KGraphError::Invalid(findings))
        }
    }

    /// Evans' complex: the Koszul complex on `M_1^t, …, M_k^t`.
    pub fn evans_complex(&self) -> Result<KoszulComplex, KGraphError> {
        self.ensure_valid()?;
        let endos = self.matrices.iter().map(Matrix::transpose).collect();
        Ok(KoszulComplex::build(self.k, endos)?)
    }

    /// Conjugates every vertex matrix by the relabeling `v ↦ perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.vertices.len();
        assert_eq!(perm.len(), n, "permutation length");
        let mut vertices = vec![String::new(); n];
        for (v, &pv) in perm.iter().enumerate() {
            vertices[pv] = self.vertices[v].clone();
        }
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let mut out = Matrix::zeros(n, n);
                for r in 0..n {
                    for c in 0..n {
                        out.set(perm[r], perm[c], m.get(r, c).clone());
                    }
                }
                out
            })
            .collect();
        Self {
            k: self.k,
            vertices,
            matrices,
            allow_sources: self.allow_sources,
        }
    }
}

/// `H_*(G_Λ)` computed as the homology of `D^Λ`.
pub fn groupoid_homology(s: &KGraphSkeleton) -> Result<HomologyProfile, KGraphError> {
    let mut profile = s.evans_complex()?.homology()?;
    if s.has_sources() {
        profile.notes.push(
            "hypothesis violated: the graph has sources; D^Λ homology computed anyway".into(),
        );
    }
    Ok(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KTheoryMethod {
    Rank1,
    Rank2,
    ConjecturalHigherRank,
}

impl KTheoryMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            KTheoryMethod::Rank1 => "rank1",
            KTheoryMethod::Rank2 => "rank2",
            KTheoryMethod::ConjecturalHigherRank => "conjectural-k≥3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HkStatus {
    VerifiedStructurally,
    Conjectural,
}

impl HkStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            HkStatus::VerifiedStructurally => "verified-structurally",
            HkStatus::Conjectural => "conjectural",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTheoryResult {
    pub k0: FgAbGroup,
    pub k1: FgAbGroup,
    pub method: KTheoryMethod,
    pub hk_status: HkStatus,
}

/// K-theory of `C*(Λ)`.
///
/// Rank 1 uses `K_0 = coker(I − M^t)` and `K_1 = ker(I − M^t)` directly;
/// rank 2 uses `K_0 = H_0 ⊕ H_2`, `K_1 = H_1`. Higher ranks are refused unless
/// `allow_conjectural`, in which case the even and odd homology sums are
/// returned and labelled as conjecture.
pub fn ktheory(s: &KGraphSkeleton, allow_conjectural: bool) -> Result<KTheoryResult, KGraphError> {
    s.ensure_valid()?;
    match s.k {
        1 => {
            let n = s.vertices.len();
            let shift = Matrix::identity(n).sub(&s.matrices[0].transpose());
            Ok(KTheoryResult {
                k0: cokernel(&shift),
                k1: FgAbGroup::free(kernel_basis(&shift).cols()),
                method: KTheoryMethod::Rank1,
                hk_status: HkStatus::VerifiedStructurally,
            })
        }
        2 => {
            let h = groupoid_homology(s)?;
            Ok(KTheoryResult {
                k0: h.groups[0].direct_sum(&h.groups[2]),
                k1: h.groups[1].clone(),
                method: KTheoryMethod::Rank2,
                hk_status: HkStatus::VerifiedStructurally,
            })
        }
        _ if allow_conjectural => {
            let h = groupoid_homology(s)?;
            Ok(KTheoryResult {
                k0: h.even_sum(),
                k1: h.odd_sum(),
                method: KTheoryMethod::ConjecturalHigherRank,
                hk_status: HkStatus::Conjectural,
            })
        }
        k => Err(KGraphError::RankUnsupported {
            operation: "K-theory",
            k,
        }),
    }
}

/// `H_n = (ℤ_g)^binom(k−1, n)` for `n < k` and `H_k = 0`, where
/// `g = gcd(edge_counts[i] − 1)`, valid for one-vertex k-graphs with at
/// least two edges of each colour.
pub fn single_vertex_closed_form(edge_counts: &[u64]) -> Result<HomologyProfile, KGraphError> {
    let k = edge_counts.len();
    if k == 0 {
        return Err(KGraphError::ZeroRank);
    }
    if let Some((colour, &count)) = edge_counts.iter().enumerate().find(|(_, &c)| c <= 1) {
        return Err(KGraphError::HypothesisViolated { colour, count });
    }
    let g = edge_counts.iter().fold(0u64, |acc, &c| acc.gcd(&(c - 1)));
    let groups = (0..=k)
        .map(|n| {
            let copies = if n < k { binomial(k - 1, n) } else { 0 };
            FgAbGroup::from_cyclic_orders(0, std::iter::repeat_n(BigInt::from(g), copies))
        })
        .collect();
    Ok(HomologyProfile::new(k, groups))
}

/// Cartesian product: rank `k_a + k_b` on `V_a × V_b`, with matrices
/// `M^a_i ⊗ I` followed by `I ⊗ M^b_j`. Vertex `(x, y)` sits at index
/// `x * |V_b| + y` and is labelled `"(x,y)"`.
pub fn product(a: &KGraphSkeleton, b: &KGraphSkeleton) -> KGraphSkeleton {
    let ia = Matrix::identity(a.vertices.len());
    let ib = Matrix::identity(b.vertices.len());
    let matrices = a
        .matrices
        .iter()
        .map(|m| m.kron(&ib))
        .chain(b.matrices.iter().map(|m| ia.kron(m)))
        .collect();
    let vertices = a
        .vertices
        .iter()
        .flat_map(|x| b.vertices.iter().map(move |y| format!("({x},{y})")))
        .collect();
    KGraphSkeleton {
        k: a.k + b.k,
        vertices,
        matrices,
        allow_sources: a.allow_sources || b.allow_sources,
    }
}

/// Categorical homology of a 1-graph from its edge incidence matrix
/// `∂_1 = s − r` on the free group on edges.
pub fn cubical_homology_rank1(s: &KGraphSkeleton) -> Result<HomologyProfile, KGraphError> {
    if s.k != 1 {
        return Err(KGraphError::RankUnsupported {
            operation: "categorical homology",
            k: s.k,
        });
    }
    s.ensure_valid()?;
    let incidence = incidence_matrix(&s.matrices[0]);
    let r = rank(&incidence);
    Ok(HomologyProfile::new(
        1,
        vec![cokernel(&incidence), FgAbGroup::free(incidence.cols() - r)],
    ))
}

/// Columns are edges; an edge with source `w` and range `v` contributes
/// `+1` at `w` and `−1` at `v`.
pub fn incidence_matrix(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| (0..n).map(move |w| (v, w)))
        .flat_map(|(v, w)| {
            let count = m.get(v, w).to_usize().expect("edge count fits in memory");
            std::iter::repeat_n((v, w), count)
        })
        .collect();
    let mut d = Matrix::zeros(n, edges.len());
    for (e, &(range, source)) in edges.iter().enumerate() {
        if range == source {
            continue;
        }
        d.set(source, e, BigInt::from(1));
        d.set(range, e, BigInt::from(-1));
    }
    d
}

/// Homology, K-theory and the HK comparison for one skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkReport {
    pub k: usize,
    pub homology: HomologyProfile,
    pub ktheory: KTheoryResult,
    pub even_sum: FgAbGroup,
    pub odd_sum: FgAbGroup,
    pub k0_matches_even: bool,
    pub k1_matches_odd: bool,
    /// Rank 1 only: the categorical homology of the graph itself.
    pub categorical: Option<HomologyProfile>,
    pub warnings: Vec<String>,
}

impl HkReport {
    /// For rank 1, degrees where categorical and groupoid homology differ.
    pub fn psi_discrepancies(&self) -> Vec<usize> {
        match &self.categorical {
            Some(cat) => (0..=1)
                .filter(|&n| cat.group(n) != self.homology.group(n))
                .collect(),
            None => Vec::new(),
        }
    }
}

pub fn hk_report(s: &KGraphSkeleton) -> Result<HkReport, KGraphError> {
    let homology = groupoid_homology(s)?;
    let kt = ktheory(s, true)?;
    let categorical = if s.k == 1 {
        Some(cubical_homology_rank1(s)?)
    } else {
        None
    };
    let mut warnings = homology.notes.clone();
    if kt.hk_status == HkStatus::Conjectural {
        warnings.push(format!(
            "rank {} K-theory is not determined by homology in general; \
             the sums below are conjectural",
            s.k
        ));
    }
    let even_sum = homology.even_sum();
    let odd_sum = homology.odd_sum();
    Ok(HkReport {
        k: s.k,
        k0_matches_even: even_sum == kt.k0,
        k1_matches_odd: odd_sum == kt.k1,
        even_sum,
        odd_sum,
        homology,
        ktheory: kt,
        categorical,
        warnings,
    })
}

impl fmt::Display for HkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank k = {}", self.k)?;
        writeln!(f, "groupoid homology:")?;
        for (n, g) in self.homology.groups.iter().enumerate() {
            writeln!(f, "  H_{n}(G) = {g}")?;
        }
        writeln!(
            f,
            "K-theory ({}; {}):",
            self.ktheory.method.tag(),
            self.ktheory.hk_status.tag()
        )?;
        writeln!(f, "  K_0 = {}", self.ktheory.k0)?;
        writeln!(f, "  K_1 = {}", self.ktheory.k1)?;
        writeln!(f, "HK comparison:")?;
        writeln!(
            f,
            "  (+)H_even = {}  vs  K_0: {}",
            self.even_sum,
            if self.k0_matches_even {
                "equal"
            } else {
                "DIFFERENT"
            }
        )?;
        writeln!(
            f,
            "  (+)H_odd  = {}  vs  K_1: {}",
            self.odd_sum,
            if self.k1_matches_odd {
                "equal"
            } else {
                "DIFFERENT"
            }
        )?;
        if let Some(cat) = &self.categorical {
            writeln!(f, "categorical vs groupoid homology:")?;
            for n in 0..=1 {
                writeln!(
                    f,
                    "  H_{n}(Λ) = {}  |  H_{n}(G) = {}",
                    cat.group(n),
                    self.homology.group(n)
                )?;
            }
            let diff = self.psi_discrepancies();
            if !diff.is_empty() {
                let degrees: Vec<String> = diff.iter().map(ToString::to_string).collect();
                writeln!(
                    f,
                    "  Ψ cannot be an isomorphism in degrees {}",
                    degrees.join(", ")
                )?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Number of weakly connected components of the underlying graph of `m`.
pub fn weak_components(m: &IntMatrix) -> usize {
    let n = m.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for v in 0..n {
        for w in 0..n {
            if !m.get(v, w).is_zero() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}
