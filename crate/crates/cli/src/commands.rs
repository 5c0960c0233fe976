use std::path::Path;

use serde_json::{json, Value};

use qf_core::chains::{budget_from_env, homology_with_budget, Theory};
use qf_core::coloring::{enumerate_colorings, shadow_complete, ParabolicColoringFile};
use qf_core::diagram::LinkDiagram;
use qf_core::error::Error;
use qf_core::field::{parse_rational, FieldElem, NumberField};
use qf_core::group::GroupTable;
use qf_core::grouphom::{RelativeCocycle3, SubgroupFamily};
use qf_core::invariants::{fundamental_class_rep, pairing_report, state_sum_report, CochainTable, InvariantReport};
use qf_core::quandle::{check_axioms, FiniteQuandle, ParabolicPoint, QuandleSpec};

use crate::{CmdResult, Failure};

pub fn read(path: impl AsRef<Path>) -> Result<String, Failure> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn read_json(path: impl AsRef<Path>) -> Result<Value, Failure> {
    let path = path.as_ref();
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn load_diagram(path: impl AsRef<Path>) -> Result<LinkDiagram, Failure> {
    Ok(LinkDiagram::parse(&read(path)?)?)
}

pub fn load_quandle(path: impl AsRef<Path>) -> Result<FiniteQuandle, Failure> {
    Ok(FiniteQuandle::from_json(&read_json(path)?)?)
}

pub fn load_cochain(path: impl AsRef<Path>, arity: usize, x: &FiniteQuandle) -> Result<CochainTable, Failure> {
    Ok(CochainTable::from_json(&read_json(path)?, arity, x.size())?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn diagram_faces(pd: &str) -> CmdResult {
    Ok(to_value(&load_diagram(pd)?))
}

pub fn quandle_check(spec: &str) -> CmdResult {
    let raw = read_json(spec)?;
    let table: Vec<Vec<usize>> = if raw.get("kind").is_some() {
        let built = QuandleSpec::from_json(&raw).and_then(|s| s.build());
        match built {
            Ok(q) => q.table().to_vec(),
            Err(Error::InvalidQuandle(msg)) => return Ok(json!({ "valid": false, "reason": msg })),
            Err(e) => return Err(e.into()),
        }
    } else {
        match raw.get("table") {
            Some(t) => serde_json::from_value(t.clone()).map_err(|e| Failure::Input(format!("table: {e}")))?,
            None => return Err(Failure::Input("expected a \"kind\" builder or a \"table\"".into())),
        }
    };
    Ok(match check_axioms(&table) {
        Ok(()) => json!({ "valid": true, "size": table.len() }),
        Err(v) => json!({ "valid": false, "size": table.len(), "violation": to_value(&v) }),
    })
}

pub fn quandle_build(spec: &str) -> CmdResult {
    let q = load_quandle(spec)?;
    let mut v = q.to_json();
    let inner = q.inner();
    v["orbits"] = to_value(&inner.orbits);
    v["inner_group_order"] = json!(inner.group.len());
    Ok(v)
}

pub fn color_enum(pd: &str, quandle: &str, shadow: Option<usize>) -> CmdResult {
    let d = load_diagram(pd)?;
    let x = load_quandle(quandle)?;
    let cols = enumerate_colorings(&d, &x);
    let mut v = json!({ "count": cols.len(), "arcs": d.arcs.len(), "colorings": cols });
    if let Some(x0) = shadow {
        if x0 >= x.size() {
            return Err(Failure::Input(format!("x0 = {x0} is not an element of a quandle of size {}", x.size())));
        }
        let shadows = cols
            .iter()
            .map(|c| shadow_complete(&d, &x, c, x0).map(|s| s.region_colors))
            .collect::<Result<Vec<_>, _>>()?;
        v["x0"] = json!(x0);
        v["region_colors"] = to_value(&shadows);
    }
    Ok(v)
}

fn check_x0(x: &FiniteQuandle, x0: usize) -> Result<(), Failure> {
    if x0 >= x.size() {
        return Err(Failure::Input(format!("x0 = {x0} is not an element of a quandle of size {}", x.size())));
    }
    Ok(())
}

pub fn statesum_report(d: &LinkDiagram, x: &FiniteQuandle, phi: &CochainTable, modulus: Option<u64>, x0: usize) -> Result<InvariantReport, Failure> {
    check_x0(x, x0)?;
    let r = state_sum_report(d, x, phi, x0)?;
    Ok(match modulus {
        Some(0) => return Err(Failure::Input("--mod must be positive".into())),
        Some(n) => r.reduced(n),
        None if phi.modulus > 0 => r.reduced(phi.modulus),
        None => r,
    })
}

pub fn statesum(pd: &str, quandle: &str, cocycle: &str, modulus: Option<u64>, x0: usize) -> CmdResult {
    let d = load_diagram(pd)?;
    let x = load_quandle(quandle)?;
    let phi = load_cochain(cocycle, 3, &x)?;
    Ok(to_value(&statesum_report(&d, &x, &phi, modulus, x0)?))
}

pub fn pairing22(pd: &str, quandle: &str, theta: &str, k1: usize, x0: usize) -> CmdResult {
    let d = load_diagram(pd)?;
    let x = load_quandle(quandle)?;
    check_x0(&x, x0)?;
    check_x0(&x, k1).map_err(|_| Failure::Input(format!("k1 = {k1} is out of range")))?;
    let theta = load_cochain(theta, 4, &x)?;
    let mut r = pairing_report(&d, &x, &theta, k1, x0)?;
    if theta.modulus > 0 {
        r = r.reduced(theta.modulus);
    }
    Ok(to_value(&r))
}

pub fn homology(quandle: &str, theory: &str, degree: usize) -> CmdResult {
    let x = load_quandle(quandle)?;
    let theory: Theory = theory.parse()?;
    let h = homology_with_budget(&x, theory, degree, budget_from_env())?;
    Ok(json!({ "rank": h.rank, "torsion": h.torsion }))
}

fn load_group(path: &str) -> Result<GroupTable, Failure> {
    Ok(GroupTable::from_json(&read_json(path)?)?)
}

pub fn malnormal(group: &str, subgroups: &str) -> CmdResult {
    let g = load_group(group)?;
    let raw = read_json(subgroups)?;
    let list = raw
        .as_array()
        .or_else(|| raw.get("subgroups").and_then(Value::as_array))
        .ok_or_else(|| Failure::Input("subgroups: expected a list".into()))?;
    let subs = list
        .iter()
        .map(|s| match s {
            Value::String(name) => Ok(g.subgroup(name)?.to_vec()),
            v => serde_json::from_value::<Vec<usize>>(v.clone()).map_err(|e| Failure::Input(format!("subgroup: {e}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fam = SubgroupFamily::new(&g, subs)?;
    Ok(to_value(&fam.malnormal_check()))
}

pub fn cocycle_check(group: &str, cocycle: &str) -> CmdResult {
    let g = load_group(group)?;
    let c = RelativeCocycle3::from_json(&read_json(cocycle)?, &g)?;
    let violation = c.check(&g)?;
    Ok(json!({ "cocycle": violation.is_none(), "violation": to_value(&violation) }))
}

fn parse_elem(s: &str) -> Result<FieldElem, Failure> {
    let coeffs = s.split(':').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(FieldElem::from_coeffs(coeffs))
}

pub fn parse_point(s: &str) -> Result<ParabolicPoint, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(Failure::Input(format!("expected a point a,b, got {s:?}")));
    };
    Ok(ParabolicPoint::new(parse_elem(a)?, parse_elem(b)?)?)
}

pub fn fundclass(pd: &str, coloring: &str, p: &str, field: Option<i64>, x0: Option<&str>) -> CmdResult {
    let mut d = load_diagram(pd)?;
    let mut file = ParabolicColoringFile::from_json(&read_json(coloring)?)?;
    let field = field.map(NumberField::quadratic).transpose()?;
    let p = parse_point(p)?;
    if let Some(x0) = x0 {
        file.x0 = parse_point(x0)?;
    }
    let (q, s) = file.shadow(&mut d, field)?;
    q.check(&p)?;
    let rep = fundamental_class_rep(&d, &q, &s, &p)?;
    let mut v = to_value(&rep);
    v["field"] = q.field.to_json();
    v["p"] = to_value(&p);
    v["x0"] = to_value(&file.x0);
    v["cycle_check"] = json!(if rep.boundary_residue == 0 { "pass" } else { "fail" });
    Ok(v)
}
