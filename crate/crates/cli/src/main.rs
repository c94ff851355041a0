//! The `comet` binary: parse the command line and dispatch.

fn main() {
    std::process::exit(comet_cli::dispatch(std::env::args_os()));
}
