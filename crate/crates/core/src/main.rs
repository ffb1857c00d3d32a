fn main() {
    std::process::exit(sfm_lab::cli::run(std::env::args_os()));
}
