use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = tropical_chabauty::cli::run(std::env::args());
    if let Some(msg) = &outcome.diagnostic {
        eprintln!("{msg}");
    }
    println!("{}", serde_json::to_string_pretty(&outcome.output).expect("json"));
    ExitCode::from(outcome.code)
}
