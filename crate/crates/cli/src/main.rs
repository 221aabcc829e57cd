use std::io::Write;

fn main() {
    let r = polaris::run(std::env::args_os());
    std::io::stdout().write_all(r.stdout.as_bytes()).ok();
    std::io::stderr().write_all(r.stderr.as_bytes()).ok();
    std::process::exit(r.code);
}
