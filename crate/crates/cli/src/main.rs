use clap::Parser;
use mannheim_cli::{exit, run, Args};

fn main() {
    let args = Args::parse();
    let code = match args.resolve().and_then(|cfg| run(&cfg)) {
        Ok(outcome) => {
            for p in &outcome.written {
                eprintln!("wrote {}", p.display());
            }
            println!("{}", outcome.summary);
            match outcome.verify_passed {
                Some(false) => exit::VERIFY_FAILED,
                _ => exit::OK,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
