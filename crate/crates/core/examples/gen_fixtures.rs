//! Regenerate the synthetic fixture images shipped under `assets/fixtures`.
//!
//! Usage: `cargo run -p tpctf --example gen_fixtures -- <output-dir>`

use tpctf::harness::fixtures::{synthetic_image, Fixture};
use tpctf::harness::save_pgm;

fn main() -> tpctf::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "assets/fixtures".to_string());
    std::fs::create_dir_all(&dir)?;
    for kind in [
        Fixture::Gradient,
        Fixture::Checkerboard,
        Fixture::Sinusoid,
        Fixture::Mixed,
    ] {
        for n in [64usize, 256] {
            let path = format!("{dir}/{}{n}.pgm", kind.name());
            save_pgm(&synthetic_image(kind, n), &path)?;
            println!("wrote {path}");
        }
    }
    Ok(())
}
