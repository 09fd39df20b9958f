fn main() {
    let (text, code) = rootnum_cli::run(std::env::args_os());
    if code == rootnum_cli::exit::OK {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    std::process::exit(code);
}
