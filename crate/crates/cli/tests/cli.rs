use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvc"))
        .args(args)
        .output()
        .expect("spawn bvc")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bvc-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    fs::write(&p, text).expect("write scratch file");
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    let text = stdout(o);
    serde_json::from_str(text.lines().last().expect("a line of output")).expect("json line")
}

#[test]
fn gen_is_deterministic() {
    let a = bvc(&[
        "gen",
        "--family",
        "unit-interval",
        "--n",
        "30",
        "--seed",
        "4",
    ]);
    let b = bvc(&[
        "gen",
        "--family",
        "unit-interval",
        "--n",
        "30",
        "--seed",
        "4",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("graph 30 "));
    let t = bvc(&[
        "gen",
        "--kind",
        "tournament",
        "--family",
        "two-colourable",
        "--n",
        "8",
    ]);
    assert!(stdout(&t).starts_with("tour 8"));
    let h = bvc(&[
        "gen",
        "--kind",
        "hyper",
        "--family",
        "threshold-sum",
        "--n",
        "9",
        "--k",
        "3",
    ]);
    assert!(stdout(&h).starts_with("hgraph 3 9 "));
}

#[test]
fn vcdim_of_cycle() {
    let c5 = write("c5.txt", "graph 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n");
    let o = bvc(&["vcdim", "--input", &c5]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["vc"], 2);
    assert_eq!(v["approximate"], false);
    let approx = json(&bvc(&["vcdim", "--approx", "--input", &c5]));
    assert_eq!(approx["approximate"], true);
    assert!(approx["vc_lower_bound"].as_u64().unwrap() <= 2);
}

#[test]
fn extract_outputs_verified_sets() {
    let g = bvc(&[
        "gen",
        "--family",
        "blowup-noise",
        "--n",
        "60",
        "--seed",
        "2",
    ]);
    let path = write("blowup.txt", &stdout(&g));
    let o = bvc(&["extract", "--input", &path]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verified"], true);
    assert!(v["size"].as_u64().unwrap() >= 3);

    let r = bvc(&[
        "extract",
        "--mode",
        "restricted",
        "--eps",
        "1/4",
        "--input",
        &path,
    ]);
    let v = json(&r);
    if r.status.success() {
        assert_eq!(v["verified"], true);
    } else {
        assert!(v["bound_stage"].is_string());
    }
}

#[test]
fn regularity_writes_pair_table() {
    let g = bvc(&[
        "gen",
        "--family",
        "unit-interval",
        "--n",
        "64",
        "--seed",
        "1",
    ]);
    let path = write("interval.txt", &stdout(&g));
    let out = scratch("pairs.csv");
    let o = bvc(&[
        "regularity",
        "--eps",
        "1/4",
        "--input",
        &path,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("i,j,density_num,density_den,status"));
    assert!(lines.all(|l| l.split(',').count() == 5));
}

#[test]
fn tournament_ops() {
    let tri = write("tri.txt", "tour 3\n010\n001\n100\n");
    let col = json(&bvc(&[
        "tournament",
        "--op",
        "colour",
        "--k",
        "1",
        "--input",
        &tri,
    ]));
    assert_eq!(col["colourable"], false);
    let col = json(&bvc(&[
        "tournament",
        "--op",
        "colour",
        "--k",
        "2",
        "--input",
        &tri,
    ]));
    assert_eq!(col["colourable"], true);
    let t = json(&bvc(&["tournament", "--op", "transitive", "--input", &tri]));
    assert_eq!(t["verified"], true);
    assert_eq!(t["size"], 2);
    let b = bvc(&["tournament", "--op", "backedge", "--input", &tri]);
    assert_eq!(stdout(&b), "graph 3 1\ne 0 2\n");
}

#[test]
fn oracle_and_bi_induced() {
    let p4 = write("p4.txt", "graph 4 3\ne 0 1\ne 1 2\ne 2 3\n");
    let cs = json(&bvc(&["oracle", "--op", "clique-stable", "--input", &p4]));
    assert_eq!(cs["clique"].as_array().unwrap().len(), 2);
    assert_eq!(cs["stable"].as_array().unwrap().len(), 2);
    let edge = write("edge.txt", "bigraph 1 1 1\ne 0 0\n");
    let found = json(&bvc(&["bi-induced", "--pattern", &edge, "--input", &p4]));
    assert_eq!(found["found"], true);
    assert_eq!(found["verified"], true);
    let naive = json(&bvc(&[
        "oracle",
        "--op",
        "bi-induced",
        "--pattern",
        &edge,
        "--input",
        &p4,
    ]));
    assert_eq!(naive["found"], true);
}

#[test]
fn hyper_prints_set_and_trace() {
    let h = bvc(&[
        "gen", "--kind", "hyper", "--family", "random", "--n", "10", "--seed", "3",
    ]);
    let path = write("hyper.txt", &stdout(&h));
    let o = bvc(&["hyper", "--input", &path]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("verified,true"));
    assert!(text.contains("step,a_size,b_size\n0,1,9\n"));
}

#[test]
fn experiment_is_reproducible() {
    let cfg = write(
        "exp.cfg",
        "pipeline = tournament\nfamily = transitive\nn = 8, 16, 32\nseeds = 2\n",
    );
    let a = bvc(&["experiment", "--no-timing", "--input", &cfg]);
    let b = bvc(&["experiment", "--no-timing", "--jobs", "2", "--input", &cfg]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 1 + 6 + 1);
    assert!(text.starts_with("kind,family,n,eps,seed,size,verified"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bvc(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        bvc(&["gen", "--family", "no-such-family", "--n", "5"])
            .status
            .code(),
        Some(2)
    );
    let bad = write(
        "bad.cfg",
        "pipeline = clique-stable\nfamily = unit-interval\nn = 8\nbogus = 1\n",
    );
    assert_eq!(bvc(&["experiment", "--input", &bad]).status.code(), Some(2));
    let g = write("small.txt", "graph 3 0\n");
    assert_eq!(
        bvc(&["extract", "--mode", "restricted", "--input", &g])
            .status
            .code(),
        Some(2)
    );
    let malformed = write("malformed.txt", "graph 3 1\ne 0 7\n");
    assert_eq!(
        bvc(&["vcdim", "--input", &malformed]).status.code(),
        Some(2)
    );
}
