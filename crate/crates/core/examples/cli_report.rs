//! Driving the command line from code and reading its report.

use palindist::cli::{execute, Format};

fn main() {
    let argv = ["palindist", "count", "--base", "10", "--upto", "10^6", "--mod", "7"];
    let (report, format) = execute(argv).expect("valid command");
    assert_eq!(format, Format::Json);
    println!("{}", report.to_json());
    print!("{}", report.to_csv());
}
