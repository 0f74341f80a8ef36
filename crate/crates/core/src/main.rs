use std::io::Write;

fn main() {
    let (code, out) = slmn::cli::run(std::env::args_os());
    // Usage errors from argument parsing are plain text; they go to stderr.
    if code != slmn::cli::EXIT_OK && !out.starts_with('{') {
        eprint!("{out}");
    } else {
        let _ = std::io::stdout().write_all(out.as_bytes());
    }
    std::process::exit(code);
}
