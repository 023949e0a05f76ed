fn main() {
    genus5::cli::install_interrupt_handler();
    let code = genus5::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
