use std::process::ExitCode;

fn main() -> ExitCode {
    let plan = match spinpaint_cli::parse_args(std::env::args_os()) {
        Ok(plan) => plan,
        Err(err) => err.exit(),
    };
    match spinpaint_cli::run(&plan) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("spinpaint {}: {err}", plan.name());
            ExitCode::FAILURE
        }
    }
}
