use std::env;
use std::path::Path;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("cargo sets CARGO_MANIFEST_DIR");
    let header = Path::new(&crate_dir).join("include").join("bpwl.h");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        pragma_once: true,
        documentation: true,
        header: Some("/* C interface to the bpwl library. */".to_string()),
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen generates the C header")
        .write_to_file(header);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
