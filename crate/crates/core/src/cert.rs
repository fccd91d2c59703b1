//! Self-contained JSON certificates. Rationals travel as strings, every
//! certificate carries the schema version and a SHA-256 digest of its
//! body, and `verify` re-checks the claim from the certificate alone.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forms::GameForm;
use crate::graph::Owner;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::sp::{verify_counterexample, BispCounterexample, SpInstance, SpOutcome};
use crate::tightness::{Direction, ResponseStrategy, TightnessWitness};
use crate::vform::{verify_ne_free, NeFreeCertificate, SeparationCertificate, VForm};
use crate::vplus::{PbrCertificate, VPlusForm, VPlusWitness};

pub const SCHEMA_VERSION: u32 = 1;

/// Budget for replaying Bi-SP counterexamples.
const REPLAY_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPlusTable {
    pub rows: usize,
    pub cols: usize,
    pub dim: usize,
    /// Row-major; `None` is `w^c`.
    pub cells: Vec<Option<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbrJson {
    pub direction: Direction,
    pub map: Vec<usize>,
    pub u: Vec<String>,
    pub margin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub owners: Vec<String>,
    pub edges: Vec<(usize, usize)>,
    pub s: usize,
    pub t: usize,
    pub costs: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Non-tightness of a game form: responses with disjoint images.
    TightnessWitness {
        form: Vec<Vec<usize>>,
        phi: Vec<usize>,
        psi: Vec<usize>,
    },
    /// Non-v-tightness: disjoint images and a separating utility.
    Separation {
        rows: usize,
        cols: usize,
        vectors: Vec<Vec<String>>,
        phi: Vec<usize>,
        psi: Vec<usize>,
        u: Vec<String>,
        margin: String,
    },
    Pbr {
        form: VPlusTable,
        pbr: PbrJson,
    },
    /// Non-v⁺-tightness: two PBRs with disjoint images.
    VplusWitness {
        form: VPlusTable,
        phi: PbrJson,
        psi: PbrJson,
    },
    /// Mean-payoff utilities without a pure NE on a complete bipartite arena.
    NeFree {
        a: usize,
        b: usize,
        ua: Vec<String>,
        ub: Vec<String>,
    },
    BispCounterexample {
        instance: InstanceJson,
        mode: String,
        /// Paths as edge lists; `null` is the symbolic outcome `c`.
        alice_set: Vec<Option<Vec<usize>>>,
        bob_set: Vec<Option<Vec<usize>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: u32,
    pub digest: String,
    #[serde(flatten)]
    pub certificate: Certificate,
}

fn digest_of(c: &Certificate) -> String {
    let body = serde_json::to_string(c).expect("certificates serialize");
    Sha256::digest(body.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Envelope {
    pub fn new(certificate: Certificate) -> Self {
        Envelope {
            schema: SCHEMA_VERSION,
            digest: digest_of(&certificate),
            certificate,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.certificate {
            Certificate::TightnessWitness { .. } => "tightness-witness",
            Certificate::Separation { .. } => "separation",
            Certificate::Pbr { .. } => "pbr",
            Certificate::VplusWitness { .. } => "vplus-witness",
            Certificate::NeFree { .. } => "ne-free",
            Certificate::BispCounterexample { .. } => "bisp-counterexample",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

pub fn parse_certificate(text: &str) -> Result<Envelope> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter()
        .map(|s| parse_rational(s).map_err(Error::InvalidWitness))
        .collect()
}

fn vplus_table(g: &VPlusForm) -> VPlusTable {
    let mut cells = Vec::with_capacity(g.rows() * g.cols());
    for x in 0..g.rows() {
        for y in 0..g.cols() {
            cells.push(g.cell(x, y).map(|w| strings(&g.vectors()[w])));
        }
    }
    VPlusTable {
        rows: g.rows(),
        cols: g.cols(),
        dim: g.dim(),
        cells,
    }
}

fn vplus_form(t: &VPlusTable) -> Result<VPlusForm> {
    let cells = t
        .cells
        .iter()
        .map(|c| c.as_ref().map(|v| rationals(v)).transpose())
        .collect::<Result<Vec<_>>>()?;
    VPlusForm::new(t.rows, t.cols, t.dim, cells)
}

fn pbr_json(c: &PbrCertificate) -> PbrJson {
    PbrJson {
        direction: c.strategy.direction,
        map: c.strategy.map.clone(),
        u: strings(&c.u),
        margin: format_rational(&c.margin),
    }
}

fn pbr_cert(j: &PbrJson) -> Result<PbrCertificate> {
    Ok(PbrCertificate {
        strategy: ResponseStrategy {
            direction: j.direction,
            map: j.map.clone(),
        },
        u: rationals(&j.u)?,
        margin: parse_rational(&j.margin).map_err(Error::InvalidWitness)?,
    })
}

fn owner_name(o: Owner) -> String {
    match o {
        Owner::Player(0) => "A".into(),
        Owner::Player(1) => "B".into(),
        Owner::Player(p) => format!("P{p}"),
        Owner::Terminal => "T".into(),
    }
}

fn owner_of(s: &str) -> Result<Owner> {
    match s {
        "A" => Ok(Owner::ALICE),
        "B" => Ok(Owner::BOB),
        "T" => Ok(Owner::Terminal),
        _ => s
            .strip_prefix('P')
            .and_then(|p| p.parse().ok())
            .map(Owner::Player)
            .ok_or_else(|| Error::InvalidWitness(format!("unknown owner {s:?}"))),
    }
}

fn outcome_list(set: &BTreeSet<SpOutcome>) -> Vec<Option<Vec<usize>>> {
    set.iter()
        .map(|o| match o {
            SpOutcome::Path(p) => Some(p.clone()),
            SpOutcome::Cycle => None,
        })
        .collect()
}

fn outcome_set(list: &[Option<Vec<usize>>]) -> BTreeSet<SpOutcome> {
    list.iter()
        .map(|o| o.clone().map_or(SpOutcome::Cycle, SpOutcome::Path))
        .collect()
}

pub fn tightness_certificate(g: &GameForm, w: &TightnessWitness) -> Envelope {
    Envelope::new(Certificate::TightnessWitness {
        form: g.to_rows(),
        phi: w.phi.map.clone(),
        psi: w.psi.map.clone(),
    })
}

pub fn separation_certificate(gv: &VForm, c: &SeparationCertificate) -> Envelope {
    let mut vectors = Vec::with_capacity(gv.rows() * gv.cols());
    for x in 0..gv.rows() {
        for y in 0..gv.cols() {
            vectors.push(strings(gv.vector(x, y)));
        }
    }
    Envelope::new(Certificate::Separation {
        rows: gv.rows(),
        cols: gv.cols(),
        vectors,
        phi: c.phi.map.clone(),
        psi: c.psi.map.clone(),
        u: strings(&c.u),
        margin: format_rational(&c.margin),
    })
}

pub fn pbr_certificate(gpv: &VPlusForm, c: &PbrCertificate) -> Envelope {
    Envelope::new(Certificate::Pbr {
        form: vplus_table(gpv),
        pbr: pbr_json(c),
    })
}

pub fn vplus_witness_certificate(gpv: &VPlusForm, w: &VPlusWitness) -> Envelope {
    Envelope::new(Certificate::VplusWitness {
        form: vplus_table(gpv),
        phi: pbr_json(&w.phi),
        psi: pbr_json(&w.psi),
    })
}

pub fn ne_free_certificate(c: &NeFreeCertificate) -> Envelope {
    Envelope::new(Certificate::NeFree {
        a: c.a,
        b: c.b,
        ua: strings(&c.ua),
        ub: strings(&c.ub),
    })
}

pub fn bisp_certificate(cx: &BispCounterexample) -> Envelope {
    let raw = cx.instance.to_raw();
    Envelope::new(Certificate::BispCounterexample {
        instance: InstanceJson {
            owners: raw.owners.iter().map(|&o| owner_name(o)).collect(),
            edges: raw.edges,
            s: raw.s,
            t: raw.t,
            costs: raw.costs.iter().map(|r| strings(r)).collect(),
        },
        mode: cx.mode.to_string(),
        alice_set: outcome_list(&cx.alice_set),
        bob_set: outcome_list(&cx.bob_set),
    })
}

fn check(c: &Certificate) -> Result<bool> {
    Ok(match c {
        Certificate::TightnessWitness { form, phi, psi } => {
            let g = GameForm::new(form.clone())?;
            TightnessWitness {
                phi: ResponseStrategy::bob(phi.clone()),
                psi: ResponseStrategy::alice(psi.clone()),
            }
            .is_valid_for(&g)
        }
        Certificate::Separation { rows, cols, vectors, phi, psi, u, margin } => {
            let table = vectors.iter().map(|v| rationals(v)).collect::<Result<Vec<_>>>()?;
            let dim = table.first().map_or(0, Vec::len);
            let gv = VForm::new(*rows, *cols, dim, table)?;
            SeparationCertificate {
                phi: ResponseStrategy::bob(phi.clone()),
                psi: ResponseStrategy::alice(psi.clone()),
                u: rationals(u)?,
                margin: parse_rational(margin).map_err(Error::InvalidWitness)?,
            }
            .is_valid_for(&gv)
        }
        Certificate::Pbr { form, pbr } => pbr_cert(pbr)?.is_valid_for(&vplus_form(form)?),
        Certificate::VplusWitness { form, phi, psi } => VPlusWitness {
            phi: pbr_cert(phi)?,
            psi: pbr_cert(psi)?,
        }
        .is_valid_for(&vplus_form(form)?),
        Certificate::NeFree { a, b, ua, ub } => {
            if *a == 0 || *b == 0 || a * b > 64 {
                return Ok(false);
            }
            verify_ne_free(&NeFreeCertificate {
                a: *a,
                b: *b,
                ua: rationals(ua)?,
                ub: rationals(ub)?,
            })?
        }
        Certificate::BispCounterexample { instance, mode, alice_set, bob_set } => {
            let owners = instance.owners.iter().map(|s| owner_of(s)).collect::<Result<Vec<_>>>()?;
            let costs = instance.costs.iter().map(|r| rationals(r)).collect::<Result<Vec<_>>>()?;
            let inst = SpInstance::new(owners, instance.edges.clone(), instance.s, instance.t, costs)?;
            let cx = BispCounterexample {
                instance: inst,
                mode: mode.parse()?,
                alice_set: outcome_set(alice_set),
                bob_set: outcome_set(bob_set),
            };
            verify_counterexample(&cx, REPLAY_BUDGET)?
        }
    })
}

/// Schema, digest and the claim itself. Malformed content counts as
/// rejection, never as a panic.
pub fn verify(e: &Envelope) -> bool {
    e.schema == SCHEMA_VERSION && e.digest == digest_of(&e.certificate) && check(&e.certificate).unwrap_or(false)
}

/// The claim alone, ignoring the digest.
pub fn verify_content(c: &Certificate) -> bool {
    check(c).unwrap_or(false)
}
