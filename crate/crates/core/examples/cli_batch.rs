//! Driving the command-line front end from code, as a batch job would.

fn main() {
    let jobs: &[&[&str]] = &[
        &[
            "polyharm", "regions", "--n", "3", "--N", "2", "--p", "1", "--alpha", "-1.5",
        ],
        &["polyharm", "integrate", "--a", "0", "--b", "-2", "--n", "2"],
        &[
            "polyharm",
            "kernelcheck",
            "--theta",
            "1",
            "--n",
            "3",
            "--points",
            "20",
        ],
        &["polyharm", "verify", "--cases", "10"],
    ];
    for args in jobs {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = polyharm::cli::run(args.iter().copied(), &mut out, &mut err);
        println!("$ {} -> exit {code}", args[1..].join(" "));
        print!(
            "{}{}",
            String::from_utf8_lossy(&out),
            String::from_utf8_lossy(&err)
        );
    }
}
