//! JSON and text rendering of results. Structs serialize in field order,
//! which is the documented key order.

use ample_homology::{FgAbGroup, HkReport, HomologyProfile, KTheoryResult};
use serde::Serialize;
use serde_json::Number;

use crate::schema::number;

#[derive(Debug, Clone, Serialize)]
pub struct GroupJson {
    pub rank: usize,
    pub torsion: Vec<Number>,
}

impl From<&FgAbGroup> for GroupJson {
    fn from(g: &FgAbGroup) -> Self {
        Self {
            rank: g.free_rank(),
            torsion: g.torsion().iter().map(number).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KTheoryJson {
    pub k0: GroupJson,
    pub k1: GroupJson,
    pub method: &'static str,
    pub hk_status: &'static str,
}

impl From<&KTheoryResult> for KTheoryJson {
    fn from(kt: &KTheoryResult) -> Self {
        Self {
            k0: (&kt.k0).into(),
            k1: (&kt.k1).into(),
            method: kt.method.tag(),
            hk_status: kt.hk_status.tag(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultJson {
    pub k: usize,
    pub homology: Vec<GroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ktheory: Option<KTheoryJson>,
    pub notes: Vec<String>,
}

impl ResultJson {
    pub fn homology(h: &HomologyProfile) -> Self {
        Self {
            k: h.k,
            homology: h.groups.iter().map(GroupJson::from).collect(),
            ktheory: None,
            notes: h.notes.clone(),
        }
    }

    pub fn with_ktheory(mut self, kt: &KTheoryResult) -> Self {
        self.ktheory = Some(kt.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HkJson {
    pub k: usize,
    pub homology: Vec<GroupJson>,
    pub ktheory: KTheoryJson,
    pub even_sum: GroupJson,
    pub odd_sum: GroupJson,
    pub k0_matches_even: bool,
    pub k1_matches_odd: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub categorical: Option<Vec<GroupJson>>,
    pub psi_discrepancies: Vec<usize>,
    pub warnings: Vec<String>,
}

impl From<&HkReport> for HkJson {
    fn from(r: &HkReport) -> Self {
        Self {
            k: r.k,
            homology: r.homology.groups.iter().map(GroupJson::from).collect(),
            ktheory: (&r.ktheory).into(),
            even_sum: (&r.even_sum).into(),
            odd_sum: (&r.odd_sum).into(),
            k0_matches_even: r.k0_matches_even,
            k1_matches_odd: r.k1_matches_odd,
            categorical: r
                .categorical
                .as_ref()
                .map(|c| c.groups.iter().map(GroupJson::from).collect()),
            psi_discrepancies: r.psi_discrepancies(),
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FindingJson {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationJson {
    pub kind: &'static str,
    pub k: usize,
    pub valid: bool,
    pub findings: Vec<FindingJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorJson {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<FindingJson>,
}

/// One compact line with a trailing newline.
pub fn line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

pub fn profile_text(h: &HomologyProfile) -> String {
    let mut out = String::new();
    for (n, g) in h.groups.iter().enumerate() {
        out.push_str(&format!("H_{n} = {g}\n"));
    }
    for note in &h.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}
