use std::time::Instant;

use fundclass::cohomology::{
    first_cocycle_failure, h2_invariants, verify_cocycle_via_compositum, verify_restriction, ActionMatrices,
    UnitsQuotient,
};
use fundclass::galois::GaloisGroup;
use fundclass::lfc::TwoCocycle;
use fundclass::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Cocycle,
    Order,
    Compositum,
    Restriction,
    UnramifiedExact,
}

impl Check {
    pub const ALL: [Check; 5] =
        [Check::Cocycle, Check::Order, Check::Compositum, Check::Restriction, Check::UnramifiedExact];

    pub fn name(self) -> &'static str {
        match self {
            Check::Cocycle => "cocycle",
            Check::Order => "order",
            Check::Compositum => "compositum",
            Check::Restriction => "restriction",
            Check::UnramifiedExact => "unramified-exact",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Check>, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
                continue;
            }
            let c = Check::ALL
                .into_iter()
                .find(|c| c.name() == part)
                .ok_or_else(|| format!("unknown check `{part}`"))?;
            out.push(c);
        }
        out.sort_unstable();
        out.dedup();
        if out.is_empty() {
            return Err("no checks selected".into());
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub millis: f64,
}

fn outcome(c: Check, status: Status, detail: Option<String>, witness: Option<Value>, t: Instant) -> CheckOutcome {
    CheckOutcome { name: c.name().into(), status, detail, witness, millis: t.elapsed().as_secs_f64() * 1e3 }
}

pub fn skipped(c: Check, detail: String) -> CheckOutcome {
    CheckOutcome { name: c.name().into(), status: Status::Skipped, detail: Some(detail), witness: None, millis: 0.0 }
}

/// Runs one check on `u`, a cocycle of a subgroup of `full`. Oracle guard
/// violations surface as errors; everything else becomes an outcome.
pub fn run_check(c: Check, full: &GaloisGroup, u: &TwoCocycle, force: bool) -> Result<CheckOutcome, Error> {
    let t = Instant::now();
    let is_full = u.group().order() == full.order();
    match c {
        Check::Cocycle => {
            let uq = UnitsQuotient::build(u.field(), u.level())?;
            let am = ActionMatrices::build(&uq, u.group())?;
            let coords = u.coords(&uq)?;
            Ok(match first_cocycle_failure(&am, &coords) {
                None => outcome(c, Status::Pass, None, None, t),
                Some((s, tt, r)) => outcome(
                    c,
                    Status::Fail,
                    Some(format!("cocycle identity fails at (sigma, tau, rho) = ({s}, {tt}, {r})")),
                    Some(json!({ "triple": [s, tt, r] })),
                    t,
                ),
            })
        }
        Check::Order => {
            let uq = UnitsQuotient::build(u.field(), u.level())?;
            let am = ActionMatrices::build(&uq, u.group())?;
            let coords = u.coords(&uq)?;
            if first_cocycle_failure(&am, &coords).is_some() {
                return Ok(outcome(c, Status::Fail, Some("table is not a cocycle".into()), None, t));
            }
            let h2 = h2_invariants(&am, force)?;
            let class = h2.classify(&am, &coords)?;
            let n = u.group().order() as u64;
            let ord = class.order();
            let status = if ord == n { Status::Pass } else { Status::Fail };
            Ok(outcome(
                c,
                status,
                Some(format!("class order {ord}, expected {n}")),
                Some(json!({ "h2": h2.invariant_factors(), "class_order": ord })),
                t,
            ))
        }
        Check::Compositum => {
            if !is_full {
                return Ok(outcome(c, Status::Skipped, Some("base is not Q_p".into()), None, t));
            }
            let r = verify_cocycle_via_compositum(full, u, force)?;
            let status = if r.holds { Status::Pass } else { Status::Fail };
            let witness = r.witness.as_ref().map(|w| json!({ "coboundary": w }));
            Ok(outcome(c, status, Some(format!("compositum group of order {}", r.group_order)), witness, t))
        }
        Check::Restriction => {
            if !is_full {
                return Ok(outcome(c, Status::Skipped, Some("base is not Q_p".into()), None, t));
            }
            let n = full.order();
            let mut tested = Vec::new();
            let mut failed = Vec::new();
            for a in 0..n {
                if full.element_order(a) != 2 {
                    continue;
                }
                let members = full.generated(&[a]);
                let ok = verify_restriction(full, &members, u.level(), force)?;
                tested.push(members.clone());
                if !ok {
                    failed.push(members);
                }
            }
            let status = if tested.is_empty() {
                Status::Skipped
            } else if failed.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            };
            Ok(outcome(
                c,
                status,
                Some(format!("{} subgroups of order 2", tested.len())),
                Some(json!({ "subgroups": tested, "failed": failed })),
                t,
            ))
        }
        Check::UnramifiedExact => {
            let l = u.field();
            if l.e() != 1 || !is_full {
                return Ok(outcome(c, Status::Skipped, Some("extension is ramified over its base".into()), None, t));
            }
            let n = u.group().order();
            let g = u.group();
            let p = l.p_element();
            let one = l.one();
            let mut bad = None;
            'outer: for s in 0..n {
                for tt in 0..n {
                    let (i, j) = (g.element(s).frob_power(), g.element(tt).frob_power());
                    let want = if i + j >= n { &p } else { &one };
                    let got = u.value(s, tt);
                    if !got.eq_within(want) || got.prec_rel() < u.level() {
                        bad = Some((s, tt));
                        break 'outer;
                    }
                }
            }
            Ok(match bad {
                None => outcome(c, Status::Pass, None, None, t),
                Some((s, tt)) => outcome(
                    c,
                    Status::Fail,
                    Some(format!("entry ({s}, {tt}) differs from the explicit table")),
                    Some(json!({ "pair": [s, tt] })),
                    t,
                ),
            })
        }
    }
}
