fn main() {
    if let Err(e) = noiseqa::cli::run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
