use std::io::Read;

fn main() {
    let mut read_stdin = || {
        let mut text = String::new();
        let _ = std::io::stdin().read_to_string(&mut text);
        text
    };
    let (out, code) = bollobas::cli::run_with(std::env::args_os(), &mut read_stdin);
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
