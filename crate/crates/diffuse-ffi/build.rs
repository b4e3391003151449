use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    let output = PathBuf::from(&crate_dir).join("include").join("diffuse.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(output);
        }
        Err(e) => {
            // Header generation failures must not mask compile errors in the
            // crate itself; surface them as a warning and let rustc speak.
            println!("cargo:warning=cbindgen failed: {e}");
        }
    }
}
