use std::io::Write;

fn main() {
    let output_dir = std::env::var_os(ltlab::cli::OUTPUT_DIR_VAR).map(Into::into);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = ltlab::cli::main_with_args(std::env::args_os(), output_dir, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
