fn main() {
    std::process::exit(geoent::cli::run(std::env::args_os()));
}
