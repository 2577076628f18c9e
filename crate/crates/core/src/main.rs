use std::io;

fn main() {
    stablab::cli::init_threads();
    let args: Vec<String> = std::env::args().collect();
    let code = stablab::cli::run(args, &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
