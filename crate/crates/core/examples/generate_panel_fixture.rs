//! Rewrites `fixtures/panel_fixture.csv` from the deterministic synthesiser.

use enerinvest::data::synth::{synthesize_panel, FIXTURE_SEED};
use enerinvest::data::write_panel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = enerinvest::fixture_dir().join("panel_fixture.csv");
    let dataset = synthesize_panel(FIXTURE_SEED);
    let file = std::fs::File::create(&path)?;
    write_panel(&dataset, file)?;
    println!("wrote {} rows to {}", dataset.len(), path.display());
    Ok(())
}
