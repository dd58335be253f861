use std::process;

fn main() {
    process::exit(cosdyn::cli::run());
}
