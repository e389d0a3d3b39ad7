use asdim::cli::{main_with, Output};

fn main() {
    let (mut stdout, mut stderr) = (std::io::stdout().lock(), std::io::stderr().lock());
    let mut out = Output { dir: None, stdout: &mut stdout, stderr: &mut stderr };
    let code = main_with(std::env::args(), &mut out);
    std::process::exit(code);
}
