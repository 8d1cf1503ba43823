//! Channel JSON round trip and a recover experiment driven by a config that points at the file.

use petzsim::channels::depolarizing;
use petzsim::experiments::{run_config, ExperimentConfig};

fn main() -> petzsim::Result<()> {
    let dir = std::env::temp_dir().join("petzsim-channel-json");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("depolarizing.json");
    std::fs::write(&path, depolarizing(2, 0.3)?.to_json()?)?;

    let config = format!(
        r#"{{
            "version": 1,
            "eps": 0.1,
            "experiment": {{
                "kind": "recover",
                "params": {{
                    "channel": {{"type": "file", "path": {:?}}},
                    "sigma": {{"type": "diagonal", "probs": [0.75, 0.25]}}
                }}
            }}
        }}"#,
        path.display().to_string()
    );
    let cfg = ExperimentConfig::from_json(&config)?;
    let record = run_config(&cfg)?;
    print!("{}", record.to_csv()?);
    Ok(())
}
