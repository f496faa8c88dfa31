use orbilink::*;

#[test]
fn dbg_additivity() {
    let cal = default_calibration();
    let s = SurfaceSpec::new(2, 3, 7).unwrap();
    let h = CyclicWord::parse("ababb").unwrap();
    for code in ["abababb", "ababbabb", "abababbabb", "abababbababb", "ababbabbababb", "abababbababbabb"] {
        let w = CyclicWord::parse(code).unwrap();
        let lk = cal.model.s3_linking(&s, &h, &w).unwrap();
        let surg = surgered_linking(&cal.model, &s, &h, &w).unwrap();
        let fast = base_linking(cal, &BaseOrbit::h(), &w).unwrap();
        println!("{code:20} s3={lk:4} surgered={surg} fast={fast}");
    }
}
