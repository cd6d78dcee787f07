//! Write a snapshot, read it back and confirm the bytes match.

use nematic::fields::{Dealias, GridSpec};
use nematic::runner::{initial_condition, read_snapshot, write_snapshot, IcKind, Snapshot};

fn main() -> nematic::Result<()> {
    let g = GridSpec::new(2, 8, Dealias::Exact)?;
    let s = initial_condition(IcKind::DefectPair, g, 0, 0.1)?;
    let (d, u) = (s.d_field(), s.u_field());
    let snap = Snapshot::from_fields(&[("d", &d), ("u", &u)])?;

    let path = std::env::temp_dir().join("nematic_example.nemf");
    write_snapshot(&path, &snap)?;
    let back = read_snapshot(&path)?;
    println!("{} bytes, dim {} n {:?}", snap.encode().len(), back.dim, back.n);
    for f in &back.fields {
        println!("  {} ({} components, {} values)", f.name, f.components, f.data.len());
    }
    println!("identical: {}", back.encode() == snap.encode());
    std::fs::remove_file(&path).map_err(nematic::Error::from)?;
    Ok(())
}
