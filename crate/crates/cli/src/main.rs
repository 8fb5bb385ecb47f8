use clap::Parser;

use sdlist_cli::{run_discover, run_evaluate, run_verify, Cli, Command};

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Discover(args) => emit(run_discover(&args), args.output.is_some()),
        Command::Evaluate(args) => emit(run_evaluate(&args), args.output.is_some()),
        Command::Verify(args) => match run_verify(&args) {
            Ok((rendered, all_ok)) => {
                print!("{rendered}");
                if all_ok {
                    0
                } else {
                    1
                }
            }
            Err(err) => {
                eprintln!("error: {err}");
                err.code
            }
        },
    };
    std::process::exit(code);
}

fn emit(result: Result<String, sdlist_cli::CliError>, written_to_file: bool) -> i32 {
    match result {
        Ok(rendered) => {
            if !written_to_file {
                print!("{rendered}");
            }
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.code
        }
    }
}
