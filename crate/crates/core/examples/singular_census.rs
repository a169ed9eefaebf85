//! Fixed tori and points of the finite quotient acting on T^8, with labels.

use spin7_flat::orbifold::{census_type_counts, singular_census};

fn main() {
    let census = singular_census();
    for row in &census.rows {
        println!(
            "fix({:<10}) type {:<3} dim {} : {:>3} components in {:>2} orbits of {}  labels {}..={}  nbhd {}",
            row.source,
            serde_json::to_value(row.kind).unwrap().as_str().unwrap(),
            row.component_dim,
            row.components,
            row.orbits,
            row.orbit_size,
            row.labels[0],
            row.labels[row.labels.len() - 1],
            row.neighbourhood,
        );
    }
    println!("{:?}", census_type_counts(&census));
}
