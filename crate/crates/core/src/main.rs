fn main() {
    std::process::exit(cardtable::cli::parse_and_dispatch(std::env::args_os()));
}
