//! Writes the example `.kt-op` files.

use std::path::PathBuf;

use clap::Parser;

use koszul_tate::corpus;

#[derive(Parser)]
#[command(name = "kt-corpus", about = "Regenerate the example operator files")]
struct Args {
    /// Output directory.
    #[arg(default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))]
    out: PathBuf,
}

fn main() -> std::io::Result<()> {
    let args = Args::parse();
    std::fs::create_dir_all(&args.out)?;
    for e in corpus::entries() {
        let path = args.out.join(&e.file_name);
        std::fs::write(&path, e.text())?;
        println!("{}", path.display());
    }
    Ok(())
}
