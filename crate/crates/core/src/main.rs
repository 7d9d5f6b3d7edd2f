use std::io;

fn main() {
    let code = jet_invariants::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
