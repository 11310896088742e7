fn main() {
    std::process::exit(eprsim::cli::main_entry());
}
