fn main() {
    // The system OpenBLAS carries the LAPACK entry points used by the
    // spectral module; the source crates only emit the search path.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
