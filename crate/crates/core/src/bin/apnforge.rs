fn main() {
    // Die quietly when the reader closes the pipe (`apnforge ... | head`)
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(apnforge::cli::main_from_args());
}
