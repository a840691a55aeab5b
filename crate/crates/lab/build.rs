use std::process::Command;

fn git(args: &[&str]) -> Option<String> {
    let out = Command::new("git").args(args).output().ok()?;
    out.status
        .success()
        .then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
        .filter(|s| !s.is_empty())
}

fn main() {
    let pkg = env!("CARGO_PKG_VERSION");
    // tagged builds describe themselves; otherwise v<pkg>-g<hash>[-dirty]
    let version = match git(&["describe", "--tags", "--dirty", "--match", "v*"]) {
        Some(d) => d,
        None => match git(&["describe", "--always", "--dirty", "--abbrev=7"]) {
            Some(d) => format!("v{pkg}-g{d}"),
            None => format!("v{pkg}"),
        },
    };
    println!("cargo:rustc-env=MINORLAB_VERSION={version}");
    if let Some(dir) = git(&["rev-parse", "--git-dir"]) {
        println!("cargo:rerun-if-changed={dir}/HEAD");
        println!("cargo:rerun-if-changed={dir}/index");
    }
    println!("cargo:rerun-if-changed=build.rs");
}
