//! Gluing data for a small SO(3) example, its mutations, and a certified entry.

use std::collections::BTreeMap;

use spin7_flat::ale::{check_compatible_gluing_data, mutate, p1_coefficients, GluingData, MUTATIONS};
use spin7_flat::enumeration::TokenTuple;
use spin7_flat::rational::q;

fn summary(name: &str, data: &GluingData) {
    let r = check_compatible_gluing_data(data);
    let conds: Vec<String> = r.conditions.iter().map(|c| format!("{}={}", c.condition, c.passed)).collect();
    println!("{name:<18} passed = {:<5} [{}]", r.passed, conds.join(" "));
}

fn main() -> spin7_flat::Result<()> {
    let rep = TokenTuple::parse("(1, a, 1, 1, 1)", 3)?.expand();
    let charges = BTreeMap::from([(75, q(1, 2)), (76, q(1, 2))]);
    let data = GluingData::from_rep(rep, charges)?;
    for (j, s) in &data.specs {
        println!("stratum {j}: E = {}[L] + R^{}", s.m, s.k);
    }
    for (j, c) in p1_coefficients(&data).p1 {
        println!("p1 coefficient at {j}: {c}");
    }
    summary("base", &data);
    for m in MUTATIONS {
        summary(&format!("{m:?}"), &mutate(&data, m)?);
    }

    let certified = TokenTuple::parse("(b, c, a, b, c)", 3)?.expand();
    let data = GluingData::from_rep(certified, BTreeMap::new())?;
    summary("(b, c, a, b, c)", &data);
    let r = check_compatible_gluing_data(&data);
    println!("{} strata with local monodromy, first: {:?}", r.monodromy_failures.len(), r.monodromy_failures.first().map(|m| (m.label, &m.nontrivial)));
    Ok(())
}
