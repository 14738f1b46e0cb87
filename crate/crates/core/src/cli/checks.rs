use serde::Serialize;
use serde_json::{json, Value};

use crate::cm::{canonical_sheaf, face_indicator, is_cohen_macaulay, link_table, stalk_formula};
use crate::derived::local_duality;
use crate::linalg::Ring;
use crate::monomial::{
    continuous_map_fibers, flatness_verdict, general_position_check, MonomialDivisors,
};
use crate::poset::{subset_label, SimplicialComplex};
use crate::projective::{
    cohomology_preservation_check, omega_star_duality, verify_rpistar_omega, MAX_DIMENSION,
};
use crate::sheaf::SheafComplex;
use crate::sr::{
    reisner_scheme_side, stanley_reisner_ideal, taylor_ext_table, verify_canonical_complex,
};

use super::Verdict;

pub const REPORT_CHECKS: &[&str] = &[
    "fvector",
    "nonfaces",
    "sr-ideal",
    "link-table",
    "cm",
    "canonical",
    "ext-table",
    "duality",
    "scheme-reisner",
    "canonical-vs-taylor",
    "projective",
];

pub const MORPHISM_CHECKS: &[&str] = &["image", "general-position", "flatness"];

fn value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn failed(e: impl std::fmt::Display) -> (Verdict, Value) {
    (Verdict::Fail, json!({ "error": e.to_string() }))
}

fn skipped(reason: &str) -> (Verdict, Value) {
    (Verdict::Skipped, json!({ "reason": reason }))
}

fn outcome<T, E: std::fmt::Display>(
    r: Result<T, E>,
    f: impl FnOnce(T) -> (Verdict, Value),
) -> (Verdict, Value) {
    r.map_or_else(failed, f)
}

pub fn report_check(name: &str, k: &SimplicialComplex, ring: Ring) -> (Verdict, Value) {
    match name {
        "fvector" => (Verdict::Info, value(&k.f_vector())),
        "nonfaces" => {
            let labels: Vec<String> = k
                .minimal_nonfaces()
                .iter()
                .map(|&p| subset_label(p, 1))
                .collect();
            (Verdict::Info, value(&labels))
        }
        "sr-ideal" => {
            let ideal = stanley_reisner_ideal(k);
            (
                Verdict::Info,
                json!({ "ideal": ideal.to_string(), "generators": ideal.generators().len() }),
            )
        }
        "link-table" => outcome(link_table(k, ring), |t| {
            (Verdict::from_bool(t.iter().all(|e| e.agree)), value(&t))
        }),
        "cm" => outcome(is_cohen_macaulay(k, ring), |r| {
            (Verdict::from_bool(r.consistent), value(&r))
        }),
        "canonical" => outcome(stalk_formula(k, ring), |formula| {
            let sheaf = canonical_sheaf(k, ring).ok().map(|s| s.rank_table());
            (
                Verdict::from_bool(formula.holds),
                json!({ "stalk_formula": value(&formula), "canonical_sheaf": sheaf }),
            )
        }),
        "ext-table" => outcome(taylor_ext_table(&stanley_reisner_ideal(k), ring), |t| {
            (Verdict::Info, value(&t))
        }),
        "duality" => {
            if !ring.is_field() {
                return skipped("local duality needs a field");
            }
            let checked = face_indicator(k, ring)
                .map_err(|e| e.to_string())
                .and_then(|f| {
                    local_duality(&SheafComplex::concentrated(f, 0)).map_err(|e| e.to_string())
                });
            outcome(checked, |r| (Verdict::from_bool(r.holds), value(&r)))
        }
        "scheme-reisner" => outcome(reisner_scheme_side(k, ring), |r| {
            (Verdict::from_bool(r.agree), value(&r))
        }),
        "canonical-vs-taylor" => outcome(verify_canonical_complex(k, ring), |r| {
            (Verdict::from_bool(r.holds), value(&r))
        }),
        "projective" => projective(k, ring),
        _ => unreachable!("check names are validated"),
    }
}

fn projective(k: &SimplicialComplex, ring: Ring) -> (Verdict, Value) {
    if !ring.is_field() {
        return skipped("the projective checks need a field");
    }
    if k.ambient() < 2 || k.faces().len() < 2 {
        return skipped("the punctured complex is empty");
    }
    let n = k.ambient() - 1;
    let checked = (|| -> Result<Value, crate::projective::ProjectiveError> {
        let preservation = cohomology_preservation_check(k, ring)?;
        let duality = omega_star_duality(k, ring)?;
        let pushforward = if n <= MAX_DIMENSION {
            Some(verify_rpistar_omega(n)?)
        } else {
            None
        };
        let holds =
            preservation.holds && duality.holds && pushforward.as_ref().is_none_or(|p| p.holds);
        Ok(json!({
            "cohomology_preservation": value(&preservation),
            "dualizing_restriction": value(&duality),
            "canonical_pushforward": pushforward.map(|p| value(&p)),
            "holds": holds,
        }))
    })();
    outcome(checked, |v| {
        (Verdict::from_bool(v["holds"] == Value::Bool(true)), v)
    })
}

pub fn morphism_check(name: &str, d: &MonomialDivisors, ring: Ring) -> (Verdict, Value) {
    match name {
        "image" => (Verdict::Info, value(&continuous_map_fibers(d))),
        "general-position" => outcome(general_position_check(d, ring), |g| {
            let agrees = g.oracle.is_none_or(|o| o == g.shortcut);
            (Verdict::from_bool(agrees), value(&g))
        }),
        "flatness" => {
            if !ring.is_field() {
                return skipped("flatness is decided over a field");
            }
            outcome(flatness_verdict(d, ring, &[]), |f| {
                let ok = f
                    .general_position
                    .oracle
                    .is_none_or(|o| o == f.general_position.shortcut)
                    && f.faithful.as_ref().is_none_or(|c| c.holds);
                (Verdict::from_bool(ok), value(&f))
            })
        }
        _ => unreachable!("check names are validated"),
    }
}
