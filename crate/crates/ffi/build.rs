use std::path::Path;

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let header = Path::new(&crate_dir).join("include").join("apnforge.h");
    std::fs::create_dir_all(header.parent().unwrap()).unwrap();
    // Prefix enum variants so the C side sees APNF_STATUS_OK instead of a
    // bare `Ok` polluting the global namespace.
    let mut config = cbindgen::Config::default();
    config.enumeration.prefix_with_name = true;
    config.enumeration.rename_variants = cbindgen::RenameRule::ScreamingSnakeCase;
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .with_language(cbindgen::Language::C)
        .with_include_guard("APNFORGE_H")
        .with_cpp_compat(true)
        .generate()
        .expect("cbindgen failed")
        .write_to_file(header);
    println!("cargo:rerun-if-changed=src/lib.rs");
}
