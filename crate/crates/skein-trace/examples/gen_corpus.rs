//! Writes the bundled corpus under `corpus/`.

use std::fs;

use skein_trace::corpus::{audit, default_dir, generate, insane_fixture};

fn main() -> std::io::Result<()> {
    let dir = default_dir();
    fs::create_dir_all(&dir)?;
    for inst in generate() {
        let a = audit(&inst);
        println!("{:28} j={:2} terms={:5} {}", inst.name, a.max_junctures, a.terms, if a.passed() { "ok" } else { "FAIL" });
        for f in &a.failures {
            println!("    {f}");
        }
        let text = serde_json::to_string_pretty(&inst).expect("serializable");
        fs::write(dir.join(format!("{}.json", inst.name)), text + "\n")?;
    }
    let fixtures = dir.join("../fixtures");
    fs::create_dir_all(&fixtures)?;
    let inst = insane_fixture();
    let text = serde_json::to_string_pretty(&inst).expect("serializable");
    fs::write(fixtures.join("insane_ordering.json"), text + "\n")?;
    Ok(())
}
