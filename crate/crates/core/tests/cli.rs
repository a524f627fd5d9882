use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallcancel"))
        .args(args)
        .env_remove("SMALLCANCEL_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schemas/verification-report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn verdicts(report: &Value) -> Vec<(String, String)> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().into(), c["verdict"].as_str().unwrap().into()))
        .collect()
}

#[test]
fn z2_verify_is_all_pass_and_fits_the_schema() {
    let out = run(&["verify", &corpus("c4t4/z2.pres"), "--radius", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert!(schema().is_valid(&r));
    assert_eq!(r["regime"], "C(4)-T(4)");
    for (name, v) in verdicts(&r) {
        assert_eq!(v, "PASS", "{name}");
    }
}

#[test]
fn triangle_verify_records_the_helly_failure_as_expected() {
    let out = run(&["verify", &corpus("c3t6/triangle.pres")]);
    assert!(out.status.success());
    let r = json(&out);
    assert!(schema().is_valid(&r));
    let v = verdicts(&r);
    let get = |n: &str| v.iter().find(|(name, _)| name == n).unwrap().1.clone();
    assert_eq!(get("full-helly"), "EXPECTED");
    assert_eq!(get("triforce"), "EXPECTED");
    assert!(v.iter().all(|(_, x)| x == "PASS" || x == "EXPECTED"));
}

#[test]
fn schema_rejects_a_fail_without_witness() {
    let out = run(&["verify", &corpus("c4t4/z2.pres"), "--radius", "2"]);
    let mut r = json(&out);
    let s = schema();
    assert!(s.is_valid(&r));
    r["checks"][0]["verdict"] = "FAIL".into();
    assert!(!s.is_valid(&r));
    r["checks"][0]["witness"] = serde_json::json!({ "error": "x" });
    assert!(s.is_valid(&r));
    r["config"]["tie_break"] = "greedy".into();
    assert!(!s.is_valid(&r));
}

#[test]
fn malformed_file_is_a_syntax_error() {
    let dir = std::env::temp_dir().join(format!("smallcancel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.pres");
    for text in ["gens: a b;\nrels: ab(\n", "rels: ab\n", "gens: a b;\nrels: abX\n"] {
        std::fs::write(&f, text).unwrap();
        let out = run(&["verify", f.to_str().unwrap()]);
        assert!(!out.status.success(), "{text}");
        assert!(out.stdout.is_empty());
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("bad.pres"), "{err}");
    }
}

#[test]
fn outputs_are_byte_identical() {
    let f = corpus("c3t6/triangle.pres");
    let cases: [&[&str]; 6] = [
        &["verify", &f, "--tie-break", "random:7"],
        &["ball", &f, "--emit", "dot"],
        &["structure", &f, "--emit", "dot"],
        &["order", &f, "--tie-break", "random:3"],
        &["basis", &f],
        &["diagrams", &f, "--max-area", "3", "--emit", "dot"],
    ];
    for args in cases {
        let (a, b) = (run(args), run(args));
        assert!(a.status.success(), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_keys_are_sorted() {
    fn sorted(v: &Value) -> bool {
        match v {
            Value::Object(m) => {
                let keys: Vec<_> = m.keys().collect();
                keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(sorted)
            }
            Value::Array(a) => a.iter().all(sorted),
            _ => true,
        }
    }
    let out = run(&["verify", &corpus("c6/hexagon.pres")]);
    // serde_json without preserve_order would hide the order, so read the raw text.
    let text = String::from_utf8(out.stdout).unwrap();
    let first: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut s = first.clone();
    s.sort();
    assert_eq!(first, s);
    assert!(sorted(&serde_json::from_str(&text).unwrap()));
}

#[test]
fn check_exit_code_follows_the_condition() {
    let w3 = corpus("c6/w3.pres");
    assert!(run(&["check", &w3, "--condition", "C6"]).status.success());
    let out = run(&["check", &w3, "--condition", "Cprime:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["witness"]["piece"], "bbbbbb");
}

#[test]
fn dot_is_rejected_where_unsupported() {
    let out = run(&["verify", &corpus("c4t4/z2.pres"), "--emit", "dot"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported format"));
    assert_ne!(run(&["ball", &corpus("c4t4/z2.pres"), "--emit", "svg"]).status.code(), Some(0));
}

#[test]
fn budget_comes_from_the_environment() {
    let f = corpus("c4t4/z2.pres");
    let out = Command::new(env!("CARGO_BIN_EXE_smallcancel"))
        .args(["ball", &f, "--radius", "1"])
        .env("SMALLCANCEL_BUDGET", "nodes=1234,area=7")
        .output()
        .unwrap();
    let budget = &json(&out)["config"]["budget"];
    assert_eq!(budget["max_nodes"], 1234);
    assert_eq!(budget["max_area"], 7);
    let out = Command::new(env!("CARGO_BIN_EXE_smallcancel"))
        .args(["ball", &f, "--radius", "1", "--budget", "nodes=99"])
        .env("SMALLCANCEL_BUDGET", "nodes=1234")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["budget"]["max_nodes"], 99);
}

#[test]
fn corpus_directives_set_defaults() {
    let out = run(&["ball", &corpus("c6/w3.pres")]);
    let cfg = &json(&out)["config"];
    assert_eq!(cfg["radius"], 6);
    assert_eq!(cfg["budget"]["lookahead"], 1);
    assert_eq!(cfg["diagram_area"], 3);
    let out = run(&["ball", &corpus("c6/w3.pres"), "--radius", "2"]);
    assert_eq!(json(&out)["config"]["radius"], 2);
}

#[test]
fn dot_outputs_follow_the_grammar() {
    let z2 = corpus("c4t4/z2.pres");
    let tri = corpus("c3t6/triangle.pres");
    let cases: [(&[&str], usize); 4] = [
        (&["structure", &z2, "--radius", "3", "--emit", "dot"], 1),
        (&["ball", &z2, "--radius", "2", "--emit", "dot"], 1),
        (&["structure", &tri, "--emit", "dot"], 1),
        (&["diagrams", &z2, "--boundary", "aabbAABB", "--max-area", "4", "--emit", "dot"], 1),
    ];
    for (args, at_least) in cases {
        let out = run(args);
        assert!(out.status.success(), "{args:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        let graphs = dot::parse(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
        assert!(graphs >= at_least, "{args:?}");
    }
    assert!(dot::parse("graph { a -> b }").is_err());
    assert!(dot::parse("digraph { a -> }").is_err());
    assert!(dot::parse("digraph g { a [label=\"x\"]; // c\n a -> b -> c [w=1] }").is_ok());
    assert!(dot::parse("digraph g { a / b }").is_err());
}

/// Recursive descent over the DOT language, without ports or HTML strings. Returns the number of graphs read.
mod dot {
    #[derive(Clone, Debug, PartialEq)]
    enum Tok {
        Id(String),
        Punct(char),
        Edge(&'static str),
    }

    fn lex(s: &str) -> Result<Vec<Tok>, String> {
        let cs: Vec<char> = s.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && cs.get(i + 1) == Some(&'/') {
                while i < cs.len() && cs[i] != '\n' {
                    i += 1;
                }
            } else if c == '/' && cs.get(i + 1) == Some(&'*') {
                i += 2;
                while i + 1 < cs.len() && !(cs[i] == '*' && cs[i + 1] == '/') {
                    i += 1;
                }
                if i + 1 >= cs.len() {
                    return Err("unterminated comment".into());
                }
                i += 2;
            } else if "{}[];,=".contains(c) {
                out.push(Tok::Punct(c));
                i += 1;
            } else if c == '-' && matches!(cs.get(i + 1), Some('>') | Some('-')) {
                out.push(Tok::Edge(if cs[i + 1] == '>' { "->" } else { "--" }));
                i += 2;
            } else if c == '"' {
                let mut t = String::new();
                i += 1;
                loop {
                    match cs.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') => {
                            t.push(*cs.get(i + 1).ok_or("dangling escape")?);
                            i += 2;
                        }
                        Some(&d) => {
                            t.push(d);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Id(t));
            } else if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                    i += 1;
                }
                if i == start {
                    return Err(format!("stray `{c}`"));
                }
                out.push(Tok::Id(cs[start..i].iter().collect()));
            } else {
                return Err(format!("unexpected `{c}`"));
            }
        }
        Ok(out)
    }

    struct P {
        toks: Vec<Tok>,
        at: usize,
        edge: &'static str,
    }

    impl P {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.at)
        }
        fn eat(&mut self, t: &Tok) -> bool {
            if self.peek() == Some(t) {
                self.at += 1;
                true
            } else {
                false
            }
        }
        fn expect(&mut self, c: char) -> Result<(), String> {
            if self.eat(&Tok::Punct(c)) {
                Ok(())
            } else {
                Err(format!("expected `{c}` at token {}: {:?}", self.at, self.peek()))
            }
        }
        fn id(&mut self) -> Result<String, String> {
            match self.peek().cloned() {
                Some(Tok::Id(s)) => {
                    self.at += 1;
                    Ok(s)
                }
                t => Err(format!("expected an id at token {}: {t:?}", self.at)),
            }
        }
        fn keyword(&self, k: &str) -> bool {
            matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case(k))
        }

        fn graph(&mut self) -> Result<(), String> {
            if self.keyword("strict") {
                self.at += 1;
            }
            self.edge = if self.keyword("digraph") {
                "->"
            } else if self.keyword("graph") {
                "--"
            } else {
                return Err("expected graph or digraph".into());
            };
            self.at += 1;
            if matches!(self.peek(), Some(Tok::Id(_))) {
                self.at += 1;
            }
            self.block()
        }

        fn block(&mut self) -> Result<(), String> {
            self.expect('{')?;
            while !self.eat(&Tok::Punct('}')) {
                self.stmt()?;
                self.eat(&Tok::Punct(';'));
            }
            Ok(())
        }

        fn attrs(&mut self) -> Result<(), String> {
            while self.eat(&Tok::Punct('[')) {
                while !self.eat(&Tok::Punct(']')) {
                    self.id()?;
                    self.expect('=')?;
                    self.id()?;
                    if !self.eat(&Tok::Punct(',')) {
                        self.eat(&Tok::Punct(';'));
                    }
                }
            }
            Ok(())
        }

        fn operand(&mut self) -> Result<(), String> {
            if self.keyword("subgraph") || self.peek() == Some(&Tok::Punct('{')) {
                if self.keyword("subgraph") {
                    self.at += 1;
                    if matches!(self.peek(), Some(Tok::Id(_))) {
                        self.at += 1;
                    }
                }
                self.block()
            } else {
                self.id().map(drop)
            }
        }

        fn stmt(&mut self) -> Result<(), String> {
            if ["graph", "node", "edge"].iter().any(|k| self.keyword(k)) {
                self.at += 1;
                return self.attrs();
            }
            self.operand()?;
            if self.eat(&Tok::Punct('=')) {
                return self.id().map(drop);
            }
            while let Some(Tok::Edge(op)) = self.peek().cloned() {
                if op != self.edge {
                    return Err(format!("`{op}` in a graph using `{}`", self.edge));
                }
                self.at += 1;
                self.operand()?;
            }
            self.attrs()
        }
    }

    pub fn parse(s: &str) -> Result<usize, String> {
        let mut p = P {
            toks: lex(s)?,
            at: 0,
            edge: "--",
        };
        let mut n = 0;
        while p.peek().is_some() {
            p.graph()?;
            n += 1;
        }
        if n == 0 {
            return Err("no graph".into());
        }
        Ok(n)
    }
}
