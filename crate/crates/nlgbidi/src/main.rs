fn main() {
    std::process::exit(nlgbidi::cli::dispatch(std::env::args()));
}
