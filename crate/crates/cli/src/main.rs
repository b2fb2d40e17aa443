use std::io::Write;

fn main() {
    let outcome = gradhooke_cli::run(std::env::args_os());
    if !outcome.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        if out.write_all(&outcome.stdout).and_then(|()| out.flush()).is_err() {
            std::process::exit(gradhooke_cli::EXIT_FAILURE);
        }
    }
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
