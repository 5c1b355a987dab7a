//! The seeded property suite that backs `quadsieve verify`.

fn main() {
    let report = quadsieve::verify::run_suite(0, true);
    print!("{}", report.to_text());
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
