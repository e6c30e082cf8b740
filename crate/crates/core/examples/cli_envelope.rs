// Driving the command-line front end from code and reading the envelope back.
//
// cargo run --example cli_envelope

use discrete_spacings::cli::{run, Payload, ResultEnvelope};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("spacings-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("exact.json");
    let code = run([
        "spacings",
        "exact",
        "--n",
        "8",
        "--k",
        "2",
        "--compare",
        "--output",
        path.to_str().ok_or("non-utf8 temp dir")?,
    ]);
    println!("exit code {code}");

    let envelope: ResultEnvelope = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    if let Payload::Exact(p) = &envelope.payload {
        println!(
            "{} terminal states, total mass {}",
            p.support_size, p.total_mass
        );
        if let Some(c) = &p.comparison {
            println!("TV(split, {:?}) = {}", c.other_method, c.tv_distance);
        }
    }
    std::fs::remove_dir_all(&dir)?;
    assert_eq!(code, 0);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
