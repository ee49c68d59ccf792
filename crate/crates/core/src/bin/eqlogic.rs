use std::io::Write;

fn main() {
    let report = eqlogic::frontend::cli::run(std::env::args_os());
    std::io::stdout().write_all(report.stdout.as_bytes()).ok();
    std::io::stderr().write_all(report.stderr.as_bytes()).ok();
    std::process::exit(report.code);
}
