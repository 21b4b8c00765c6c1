fn main() {
    std::process::exit(coolchan::cli::main());
}
