use orbilink::*;
use orbilink::template::{pair_stats, self_stats, linking_from_stats, self_linking_from_stats};

fn w(s: &str) -> CyclicWord { CyclicWord::parse(s).unwrap() }

#[test]
fn search_extended_237() {
    let s = SurfaceSpec::new(2, 3, 7).unwrap();
    let h = w("ababb");
    let words: Vec<CyclicWord> = enumerate_orbits(&s, 17).unwrap().into_iter().map(|c| c.word).collect();
    println!("words up to 17: {}", words.len());
    let zones = [-4i64, -2, 0, 2, 4];
    let mut hits = Vec::new();
    for rev_a in [false, true] {
      for rev_b in [false, true] {
        // precompute stats under this order
        let hstats = self_stats(&h, rev_a, rev_b).unwrap();
        let prof: Vec<_> = words.iter().filter(|x| **x != h).map(|x| {
            let st = pair_stats(&h, x, rev_a, rev_b).unwrap();
            let blocks = block_decomposition(x, &s).unwrap();
            (st, blocks)
        }).collect();
        for twist_a in -6i64..=6 {
          for twist_b in -6i64..=6 {
            for layering in [Layering::AOverB, Layering::BOverA] {
              for fold_a in [-1i64, 0, 1] {
                for fold_b in [-1i64, 0, 1] {
                  for z_ab_ba in zones {
                    for z_ab_bb in zones {
                      let p = TemplateParams {
                        order_reversing_a: rev_a, order_reversing_b: rev_b,
                        twist_a, twist_b, fold_a, fold_b, layering,
                        zone_aa_ba: 0, zone_aa_bb: 0,
                        zone_ab_ba: z_ab_ba, zone_ab_bb: z_ab_bb,
                      };
                      if p.validate().is_err() { continue; }
                      let Ok(slk) = self_linking_from_stats(&p, &hstats) else { continue };
                      if slk != -6 { continue; }
                      let tablev = |b: &Block| -> i64 {
                          match (b.i, b.j) { (1,1) => -6, (2,1) => -8, (1,2) => -9, _ => -12 }
                      };
                      let mut ok = true;
                      for (st, blocks) in &prof {
                          let Ok(lk) = linking_from_stats(&p, st) else { ok = false; break };
                          let expect: i64 = blocks.iter().map(tablev).sum();
                          if lk != expect { ok = false; break }
                      }
                      if ok { hits.push(p); }
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
    println!("fully additive (<=17) fixture hits: {}", hits.len());
    for p in hits.iter().take(12) {
        println!("{p:?}");
    }
}
