use neumann::cli::{run, EXIT_USAGE};

fn main() {
    let (code, out) = run(std::env::args_os());
    if code == EXIT_USAGE {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
