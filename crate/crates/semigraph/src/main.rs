fn main() {
    if let Err(err) = semigraph::harness::cli::run() {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
