//! Parse a utility expression, print it back and evaluate it.
//!
//! `cargo run --example parse_utility -- "x*y - 0.5*x^2" x=2 y=3`

use std::collections::HashMap;

use splitnash::{eval_utility, parse_utility};

fn main() -> splitnash::Result<()> {
    let mut args = std::env::args().skip(1);
    let source = args.next().unwrap_or_else(|| "a*b*c - 4*a^2".to_string());
    let mut bindings: HashMap<String, f64> = args
        .filter_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            Some((k.to_string(), v.parse().ok()?))
        })
        .collect();

    let expr = parse_utility(&source)?;
    println!("parsed:    {expr}");
    println!("variables: {:?}", expr.variables());
    for v in expr.variables() {
        bindings.entry(v).or_insert(1.0);
    }
    println!("value at {bindings:?} = {}", eval_utility(&expr, &bindings)?);

    // Printing and re-parsing gives the same tree.
    assert_eq!(parse_utility(&expr.to_string())?, expr);

    if let Err(e) = parse_utility("a * (b + ") {
        println!("bad input reports: {e}");
    }
    Ok(())
}
