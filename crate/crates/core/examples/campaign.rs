//! The batch front-end driven from Rust: norm report, split campaign and
//! atom-file validation, with the same configs `lab` reads.

use hardy_products::atoms::{make_atom, AtomicDecomposition};
use hardy_products::campaign::{cmd_norm, cmd_split, cmd_validate, CampaignConfig, CliResult};
use hardy_products::grid::{Ball, DataFormat, GridSpec};

fn main() -> CliResult<()> {
    let dir = std::env::temp_dir().join("hardy_products_campaign_example");
    std::fs::create_dir_all(&dir).map_err(hardy_products::Error::from)?;

    let norm = CampaignConfig::from_json(include_str!("configs/norm.json"), &dir)?;
    let out = cmd_norm(&norm)?;
    println!("{:?} of regularized log: {:.4}", out.which, out.value);

    let split = CampaignConfig::from_json(include_str!("configs/split.json"), &dir)?;
    let out = cmd_split(&split)?;
    println!("{}", out.csv);
    println!("max C1 = {:.4} (draw {}), max C2 = {:.4}", out.summary.c1.max, out.summary.c1.argmax_draw, out.summary.c2.max);

    let spec = GridSpec::new(1, 4.0, 513)?;
    let mut d = AtomicDecomposition::new(spec, 1.0);
    d.push(0.5, make_atom(&spec, &Ball::new(vec![-1.0], 0.5)?, 1.0, 0)?)?;
    d.push(-1.0, make_atom(&spec, &Ball::new(vec![1.0], 0.25)?, 1.0, 1)?)?;
    d.save(dir.join("atoms.json"), DataFormat::Csv)?;
    let validate = CampaignConfig::from_json(include_str!("configs/validate.json"), &dir)?;
    print!("{}", cmd_validate(&validate)?.table());
    println!("reports in {}", dir.join("reports").display());
    Ok(())
}
