fn main() {
    std::process::exit(hgeo::cli::run(std::env::args_os()));
}
