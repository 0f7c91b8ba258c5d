//! Exact checks of every commutation relation of the operator families, and
//! the scan showing that the Δ = 4 analogue of the triplet construction
//! never closes linearly.
//!
//! Each check produces a [`RelationReport`] carrying the exact residual
//! `lhs - rhs`; a relation holds iff the residual is the zero operator.

mod linear;
mod q2;
mod tensor;

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::exactnum::int;
use crate::generators::{bosonic_gens, fermionic_gens, AlgebraParams, Bosonic, Fermionic, Metric, MixSpec, Tower};
use crate::weyl::{DiffOp, MatOp};

pub use linear::{bosonic_linear_basis, delta4_scan, linear_residual, default_delta4_grid, ObstructionReport, DELTA4_DEFAULT_N};
pub use q2::{metric_scale, search_mix_specs, verify_identities, verify_q2, verify_q2_matrices, verify_q2_with, MixSearchEntry, ShadowReport};
pub use tensor::{identify_tplus_qbar, verify_osp22, verify_sl2, verify_tensor, verify_triplet_law, TowerForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
        })
    }
}

/// Outcome of one exact relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub tag: String,
    pub n: Option<u32>,
    pub delta: Option<u32>,
    pub alpha: Option<i64>,
    pub beta: Option<i64>,
    pub mix: Option<MixSpec>,
    /// `lhs - rhs`, zero iff the relation holds.
    pub residual: MatOp,
    pub note: Option<String>,
}

impl RelationReport {
    pub fn new(tag: impl Into<String>, residual: MatOp) -> Self {
        RelationReport {
            tag: tag.into(),
            n: None,
            delta: None,
            alpha: None,
            beta: None,
            mix: None,
            residual,
            note: None,
        }
    }

    pub fn compare(tag: impl Into<String>, lhs: &MatOp, rhs: &MatOp) -> Self {
        Self::new(tag, lhs - rhs)
    }

    pub fn params(mut self, p: &AlgebraParams) -> Self {
        self.n = Some(p.n);
        self.delta = Some(p.delta);
        self
    }

    pub fn n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn alpha(mut self, a: i64) -> Self {
        self.alpha = Some(a);
        self
    }

    pub fn beta(mut self, b: i64) -> Self {
        self.beta = Some(b);
        self
    }

    pub fn mix(mut self, m: &MixSpec) -> Self {
        self.mix = Some(m.clone());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn status(&self) -> Status {
        if self.residual.is_zero() {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    pub fn holds(&self) -> bool {
        self.status() == Status::Holds
    }

    /// `EQ<tag> n=.. delta=.. alpha=.. beta=.. status=..`, omitting absent
    /// fields.
    pub fn line(&self) -> String {
        let mut s = format!("EQ{}", self.tag);
        let fields = [
            ("n", self.n.map(i64::from)),
            ("delta", self.delta.map(i64::from)),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ];
        for (name, v) in fields {
            if let Some(v) = v {
                s.push_str(&format!(" {name}={v}"));
            }
        }
        s.push_str(&format!(" status={}", self.status()));
        s
    }
}

impl Serialize for RelationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RelationReport", 9)?;
        st.serialize_field("tag", &self.tag)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("alpha", &self.alpha)?;
        st.serialize_field("beta", &self.beta)?;
        st.serialize_field("mix", &self.mix.as_ref().map(MixSpec::label))?;
        st.serialize_field("status", &self.status())?;
        st.serialize_field("residual", &self.residual.to_string())?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

/// Generator which a fault perturbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fault {
    TPlus,
    TZero,
    TMinus,
    J,
    Q(usize),
    QBar(usize),
}

impl std::str::FromStr for Fault {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || crate::Error::InvalidParams(format!("unknown fault {s:?}; expected T+, T0, T-, J, Q<k> or Qbar<k>"));
        match s {
            "T+" => Ok(Fault::TPlus),
            "T0" => Ok(Fault::TZero),
            "T-" => Ok(Fault::TMinus),
            "J" => Ok(Fault::J),
            _ => {
                if let Some(k) = s.strip_prefix("Qbar") {
                    k.parse().map(Fault::QBar).map_err(|_| bad())
                } else if let Some(k) = s.strip_prefix('Q') {
                    k.parse().map(Fault::Q).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// The full generator set for one `(n, Δ)`, possibly with a fault injected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub params: AlgebraParams,
    pub bosonic: Bosonic,
    pub fermionic: Fermionic,
}

impl Generators {
    pub fn new(params: AlgebraParams) -> Self {
        Generators {
            params,
            bosonic: bosonic_gens(&params),
            fermionic: fermionic_gens(&params),
        }
    }

    /// Perturbs a single coefficient of one generator by one unit.
    pub fn with_fault(mut self, fault: Fault) -> Self {
        let bump_bottom = |op: &mut MatOp, extra: DiffOp| {
            let e = op.entry_mut(1, 1);
            *e = &*e + &extra;
        };
        match fault {
            // x^2 ∂ - n x  ->  x^2 ∂ - (n - 1) x
            Fault::TPlus => bump_bottom(&mut self.bosonic.t_plus, DiffOp::x()),
            Fault::TZero => bump_bottom(&mut self.bosonic.t_zero, DiffOp::one()),
            Fault::TMinus => bump_bottom(&mut self.bosonic.t_minus, DiffOp::d()),
            Fault::J => bump_bottom(&mut self.bosonic.j, DiffOp::one()),
            Fault::Q(a) => {
                let extra = self.fermionic.q(a as i64);
                self.fermionic = self.fermionic.with_added(Tower::Q, a, &extra);
            }
            Fault::QBar(a) => {
                // bump the coefficient of the highest-order term
                let q = self.fermionic.qbar(a as i64);
                let lead = q.entry(0, 1).terms().last().map(|((i, j), _)| (i, j));
                if let Some((i, j)) = lead {
                    let extra = MatOp::upper(DiffOp::term(i, j, crate::exactnum::ParamPoly::constant(crate::exactnum::Var::K0, int(1))));
                    self.fermionic = self.fermionic.with_added(Tower::QBar, a, &extra);
                }
            }
        }
        self
    }
}

/// Options for [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n_max: u32,
    pub delta_max: u32,
    pub mix: MixSpec,
    pub metric: Metric,
    pub fault: Option<Fault>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: 12,
            delta_max: 4,
            mix: MixSpec::default(),
            metric: Metric::default(),
            fault: None,
        }
    }
}

/// Every relation over `Δ = 1..=delta_max`, `n = Δ..=n_max` (the q(2)
/// checks at Δ = 2 use `n >= 2`). Reports come back in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<RelationReport>> {
    use rayon::prelude::*;

    let mut jobs = Vec::new();
    for delta in 1..=cfg.delta_max {
        for n in delta..=cfg.n_max.max(delta) {
            jobs.push(AlgebraParams::new(n, delta)?);
        }
    }
    let per_params = jobs
        .par_iter()
        .map(|p| -> Result<Vec<RelationReport>> {
            let mut gens = Generators::new(*p);
            if let Some(f) = cfg.fault {
                gens = gens.with_fault(f);
            }
            let mut out = verify_sl2(&gens);
            out.extend(verify_tensor(&gens));
            if p.delta == 1 {
                out.extend(verify_osp22(&gens)?);
            }
            if p.delta == 2 {
                out.extend(verify_triplet_law(&gens)?);
                out.extend(verify_q2_with(&gens, &cfg.mix, cfg.metric)?);
                if cfg.fault.is_none() {
                    out.extend(verify_identities(p.n));
                }
            }
            if p.delta == 4 {
                out.extend(tensor::verify_quintet_law(&gens));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_params.into_iter().flatten().collect())
}
