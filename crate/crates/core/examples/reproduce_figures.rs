//! Writes the figure data (fig2.csv .. fig5.csv) to the directory given as
//! the first argument, `figures/` by default.

use std::path::PathBuf;

fn main() -> qmb::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "figures".into());
    for path in qmb::figures::write_all(&dir)? {
        println!("{}", path.display());
    }
    Ok(())
}
