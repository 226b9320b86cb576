//! Checks run on a directory of shipped fixtures by `verify-all --fixtures`.

use std::fmt;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use cutlab::aggregation::{aggregation_closure_outer, one_row_closure, MultiplierParams};
use cutlab::geometry::integer_hull::{assignment_count, hull_generators, max_over};
use cutlab::geometry::ip::solve_ip;
use cutlab::instance::io::{parse_instance, parse_polytope, to_json};
use cutlab::instance::{is_preprocessed, MilpInstance, Tag};
use cutlab::rational::{self, Rational};
use cutlab::sparsity::{
    dist_pk, fractional_chromatic, interaction_graph, sparse_distance_bound, verify_eta_bound, SupportList,
};
use cutlab::Caps;

#[derive(Debug, Clone, Serialize)]
pub struct FixtureCheck {
    pub fixture: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for FixtureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] fixture {}: {}", self.fixture, self.detail)
    }
}

pub fn check_dir(dir: &Path, caps: &Caps) -> anyhow::Result<Vec<FixtureCheck>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let fixture = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let text = std::fs::read_to_string(&p)?;
        let (pass, detail) = match check_text(&text, caps) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e:#}")),
        };
        out.push(FixtureCheck { fixture, pass, detail });
    }
    Ok(out)
}

fn check_text(text: &str, caps: &Caps) -> anyhow::Result<(bool, String)> {
    if let Ok(inst) = parse_instance(text) {
        return check_instance(&inst, caps);
    }
    if let Ok((_, p)) = parse_polytope(text) {
        let mut notes = Vec::new();
        let mut ok = true;
        for k in 1..=p.dim {
            let d = dist_pk(&p, k, caps)?;
            let b = sparse_distance_bound(p.dim, k, p.len())?;
            ok &= b.certifies(&d.sq_dist);
            notes.push(format!("k={k}: {}", rational::format(&d.sq_dist)));
        }
        return Ok((ok, format!("polytope, sq_dist {}", notes.join(", "))));
    }
    let e = parse_instance(text).expect_err("checked above");
    Err(anyhow::Error::new(e).context("neither an instance nor a polytope"))
}

fn check_instance(inst: &MilpInstance, caps: &Caps) -> anyhow::Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut ok = parse_instance(&to_json(inst))? == *inst;
    notes.push(format!("round trip {ok}"));
    let c = &inst.objective;
    let lp = inst.solve_relaxation(c, &[])?;
    let ip = solve_ip(inst, c, &[])?;
    let small = assignment_count(inst).is_some_and(|n| n <= caps.max_points.into());
    if small {
        let z_i = max_over(&hull_generators(inst, caps)?, c);
        let agree = z_i == ip.as_ref().map(|s| s.value.clone());
        ok &= agree;
        notes.push(format!("enumeration and branch-and-bound agree {agree}"));
    }
    if let Some(s) = &ip {
        let above = lp.value >= s.value;
        ok &= above;
        notes.push(format!("z_LP {} >= z_I {}", rational::format(&lp.value), rational::format(&s.value)));
    }
    if let (Some(part), true) = (&inst.partition, inst.has_tag(Tag::Packing) && small) {
        let g = interaction_graph(inst, part)?;
        let eta = fractional_chromatic(&g, caps)?;
        let rep = verify_eta_bound(inst, part, &SupportList::single_nodes(part.len()), &eta, &[c.clone()], caps)?;
        ok &= rep.all_pass();
        notes.push(format!("eta {} bound {}", rational::format(&eta), rep.all_pass()));
    }
    if is_preprocessed(inst) && small {
        let one = one_row_closure(inst, caps)?.max_value(c)?;
        let agg = aggregation_closure_outer(inst, &MultiplierParams::default(), 20, 0, caps)?.max_value(c)?;
        let z_i: Option<Rational> = ip.as_ref().map(|s| s.value.clone());
        let chain = lp.value >= one && one >= agg && z_i.is_some_and(|z| agg >= z);
        ok &= chain;
        notes.push(format!("closure chain {chain}"));
    }
    Ok((ok, format!("{}: {}", inst.name, notes.join("; "))))
}
