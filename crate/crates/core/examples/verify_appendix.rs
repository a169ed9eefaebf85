//! Check the bundled SO(3) and SO(4) lists against the enumeration.

use spin7_flat::enumeration::{appendix, parse_list, verify_appendix};

fn main() -> spin7_flat::Result<()> {
    for (n, text) in [(3, appendix::SO3_LIST), (4, appendix::SO4_LIST)] {
        let list = parse_list(text, n)?;
        let r = verify_appendix(&list, n)?;
        println!(
            "{}: {} entries, {} uncertified, {} duplicate pairs, {} missing -> {}",
            r.group,
            r.entries,
            r.uncertified.len(),
            r.duplicates.len(),
            r.missing.len(),
            if r.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
