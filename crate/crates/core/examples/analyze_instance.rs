//! Full analysis of one instance, as `eschenburg analyze` prints it.
//!
//!     cargo run --example analyze_instance -- "p=0,1,-1;q=0,0,0;a=-3,0,-1;b=0,-2,-2"

use eschenburg::cli::{analyze, render_analysis};
use eschenburg::TorusParams;

fn main() {
    let t = match std::env::args().nth(1) {
        Some(s) => s.parse().unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(2)
        }),
        None => TorusParams::wallach(),
    };
    match analyze(&t, 16) {
        Ok(r) => print!("{}", render_analysis(&r)),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
