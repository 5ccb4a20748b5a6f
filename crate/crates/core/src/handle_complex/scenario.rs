//! Scripted and randomized handle-complex scenarios for the surgery suites.
//!
//! Essentiality is a property of the ambient map, so scenario builders mark
//! it explicitly; the randomized builder covers strips of both monodromies,
//! capped and monkey-attached chains, and directly glued 0-handle pairs.

use super::{Essentiality, Gluing, Handle, HandleComplex, HandleId, HandleKind};
use crate::rng::SplitMix64;
use num_rational::Rational64;
use std::collections::BTreeMap;

fn rat(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

/// A single unglued 0-handle.
pub fn single_h0() -> HandleComplex {
    HandleComplex::new(
        1,
        3,
        vec![Handle {
            id: 0,
            kind: HandleKind::H0,
            triangle: 0,
            sides: vec![0],
            arcs: vec![rat(1, 2)],
        }],
        Vec::new(),
        BTreeMap::new(),
    )
    .expect("valid scenario")
}

/// A single monkey-handle.
pub fn single_monkey() -> HandleComplex {
    HandleComplex::new(
        1,
        3,
        vec![Handle {
            id: 0,
            kind: HandleKind::Monkey,
            triangle: 0,
            sides: vec![0, 1, 2],
            arcs: vec![rat(1, 1), rat(1, 1), rat(1, 1)],
        }],
        Vec::new(),
        BTreeMap::new(),
    )
    .expect("valid scenario")
}

/// An open chain of `k` 1-handles (no caps).
pub fn open_chain(k: usize) -> HandleComplex {
    let handles = (0..k)
        .map(|i| Handle {
            id: i,
            kind: HandleKind::H1,
            triangle: i,
            sides: vec![0, 1],
            arcs: vec![rat(1, 1), rat(1, 1)],
        })
        .collect();
    let gluings = (0..k.saturating_sub(1))
        .map(|i| Gluing { a: (i, 1), b: (i + 1, 0), twisted: false })
        .collect();
    HandleComplex::new(k, 3 * k as u64, handles, gluings, BTreeMap::new())
        .expect("valid scenario")
}

/// A cyclic strip of `k` 1-handles; Möbius iff `mobius`.
pub fn strip(k: usize, mobius: bool, annotation: Essentiality) -> HandleComplex {
    let mut c = strip_with_twists(k, if mobius { &[0][..] } else { &[][..] });
    c.strip_annotations.insert(0, annotation);
    c
}

/// A cyclic strip of `k` 1-handles with the given gluings twisted.
pub fn strip_with_twists(k: usize, twisted_gluings: &[usize]) -> HandleComplex {
    assert!(k >= 1);
    let handles: Vec<Handle> = (0..k)
        .map(|i| Handle {
            id: i,
            kind: HandleKind::H1,
            triangle: i,
            sides: vec![0, 1],
            arcs: vec![rat(1, 1), rat(3, 2)],
        })
        .collect();
    let gluings: Vec<Gluing> = (0..k)
        .map(|i| Gluing {
            a: (i, 1),
            b: ((i + 1) % k, 0),
            twisted: twisted_gluings.contains(&i),
        })
        .collect();
    HandleComplex::new(k, 3 * k as u64, handles, gluings, BTreeMap::new())
        .expect("valid scenario")
}

/// Two disjoint inessential annuli with separated handle-id ranges.
pub fn two_strips() -> HandleComplex {
    let mut handles = Vec::new();
    let mut gluings = Vec::new();
    for (base, len) in [(0usize, 3usize), (10, 4)] {
        for i in 0..len {
            handles.push(Handle {
                id: base + i,
                kind: HandleKind::H1,
                triangle: base / 2 + i,
                sides: vec![0, 1],
                arcs: vec![rat(1, 1), rat(1, 1)],
            });
        }
        for i in 0..len {
            gluings.push(Gluing {
                a: (base + i, 1),
                b: (base + (i + 1) % len, 0),
                twisted: false,
            });
        }
    }
    let mut ann = BTreeMap::new();
    ann.insert(0, Essentiality::Inessential);
    ann.insert(10, Essentiality::Inessential);
    HandleComplex::new(9, 27, handles, gluings, ann).expect("valid scenario")
}

/// Two 0-handles glued directly along a common edge germ.
pub fn h0_pair() -> HandleComplex {
    let handles = vec![
        Handle { id: 0, kind: HandleKind::H0, triangle: 0, sides: vec![0], arcs: vec![rat(1, 2)] },
        Handle { id: 1, kind: HandleKind::H0, triangle: 1, sides: vec![0], arcs: vec![rat(1, 2)] },
    ];
    let gluings = vec![Gluing { a: (0, 0), b: (1, 0), twisted: false }];
    HandleComplex::new(2, 6, handles, gluings, BTreeMap::new()).expect("valid scenario")
}

/// Chain of `k` 1-handles capped by a 0-handle at both ends.
pub fn capped_chain(k: usize) -> HandleComplex {
    assert!(k >= 1);
    let mut handles = vec![Handle {
        id: 0,
        kind: HandleKind::H0,
        triangle: 0,
        sides: vec![0],
        arcs: vec![rat(1, 2)],
    }];
    for i in 1..=k {
        handles.push(Handle {
            id: i,
            kind: HandleKind::H1,
            triangle: i,
            sides: vec![0, 1],
            arcs: vec![rat(1, 1), rat(1, 1)],
        });
    }
    handles.push(Handle {
        id: k + 1,
        kind: HandleKind::H0,
        triangle: k + 1,
        sides: vec![0],
        arcs: vec![rat(1, 2)],
    });
    let mut gluings = vec![Gluing { a: (0, 0), b: (1, 0), twisted: false }];
    for i in 1..k {
        gluings.push(Gluing { a: (i, 1), b: (i + 1, 0), twisted: false });
    }
    gluings.push(Gluing { a: (k, 1), b: (k + 1, 0), twisted: false });
    HandleComplex::new(k + 2, 3 * (k + 2) as u64, handles, gluings, BTreeMap::new())
        .expect("valid scenario")
}

/// One inessential annulus, one inessential Möbius band, one glued 0-handle
/// pair, one essential annulus, and a monkey-handle with an attached chain.
pub fn mixed() -> HandleComplex {
    let mut handles = Vec::new();
    let mut gluings = Vec::new();
    let mut ann = BTreeMap::new();
    let mut tri = 0usize;
    let mut next_tri = || {
        let t = tri;
        tri += 1;
        t
    };

    // Inessential annulus: ids 0..3.
    for i in 0..3usize {
        handles.push(Handle {
            id: i,
            kind: HandleKind::H1,
            triangle: next_tri(),
            sides: vec![0, 1],
            arcs: vec![rat(1, 1), rat(1, 1)],
        });
    }
    for i in 0..3usize {
        gluings.push(Gluing { a: (i, 1), b: ((i + 1) % 3, 0), twisted: false });
    }
    ann.insert(0, Essentiality::Inessential);

    // Inessential Möbius band: ids 10..12.
    for i in 0..2usize {
        handles.push(Handle {
            id: 10 + i,
            kind: HandleKind::H1,
            triangle: next_tri(),
            sides: vec![0, 1],
            arcs: vec![rat(1, 2), rat(1, 2)],
        });
    }
    gluings.push(Gluing { a: (10, 1), b: (11, 0), twisted: false });
    gluings.push(Gluing { a: (11, 1), b: (10, 0), twisted: true });
    ann.insert(10, Essentiality::Inessential);

    // Glued 0-handle pair: ids 20, 21.
    for i in 0..2usize {
        handles.push(Handle {
            id: 20 + i,
            kind: HandleKind::H0,
            triangle: next_tri(),
            sides: vec![0],
            arcs: vec![rat(1, 4)],
        });
    }
    gluings.push(Gluing { a: (20, 0), b: (21, 0), twisted: false });

    // Essential annulus: ids 30, 31.
    for i in 0..2usize {
        handles.push(Handle {
            id: 30 + i,
            kind: HandleKind::H1,
            triangle: next_tri(),
            sides: vec![0, 1],
            arcs: vec![rat(2, 1), rat(2, 1)],
        });
    }
    gluings.push(Gluing { a: (30, 1), b: (31, 0), twisted: false });
    gluings.push(Gluing { a: (31, 1), b: (30, 0), twisted: false });
    ann.insert(30, Essentiality::Essential);

    // Monkey with a short chain hanging off one germ: ids 40 (monkey), 41.
    handles.push(Handle {
        id: 40,
        kind: HandleKind::Monkey,
        triangle: next_tri(),
        sides: vec![0, 1, 2],
        arcs: vec![rat(1, 1), rat(1, 1), rat(1, 1)],
    });
    handles.push(Handle {
        id: 41,
        kind: HandleKind::H1,
        triangle: next_tri(),
        sides: vec![0, 1],
        arcs: vec![rat(1, 1), rat(1, 1)],
    });
    gluings.push(Gluing { a: (40, 0), b: (41, 0), twisted: false });

    let t = tri;
    HandleComplex::new(t, 3 * t as u64, handles, gluings, ann).expect("valid scenario")
}

/// Randomized complex: a few strips (either monodromy, random annotations),
/// chains with random caps or monkey attachments, and optional glued
/// 0-handle pairs.
pub fn random_complex(rng: &mut SplitMix64) -> HandleComplex {
    let mut handles: Vec<Handle> = Vec::new();
    let mut gluings: Vec<Gluing> = Vec::new();
    let mut ann = BTreeMap::new();
    let mut next_id = 0usize;
    let mut tri = 0usize;

    let arc = |rng: &mut SplitMix64| rat(rng.range_i64(1, 8), rng.range_i64(1, 4));

    // Monkeys first so chains can attach to them.
    let monkey_count = rng.below(3) as usize;
    let mut monkey_germs: Vec<(HandleId, u8)> = Vec::new();
    for _ in 0..monkey_count {
        let id = next_id;
        next_id += 1;
        handles.push(Handle {
            id,
            kind: HandleKind::Monkey,
            triangle: tri,
            sides: vec![0, 1, 2],
            arcs: vec![arc(rng), arc(rng), arc(rng)],
        });
        tri += 1;
        for s in 0..3u8 {
            monkey_germs.push((id, s));
        }
    }

    // Strips.
    for _ in 0..rng.below(3) {
        let len = rng.below(5) as usize + 1;
        let base = next_id;
        for _ in 0..len {
            let id = next_id;
            next_id += 1;
            handles.push(Handle {
                id,
                kind: HandleKind::H1,
                triangle: tri,
                sides: vec![0, 1],
                arcs: vec![arc(rng), arc(rng)],
            });
            tri += 1;
        }
        let mut parity_budget = rng.chance(0.5);
        for i in 0..len {
            let twisted = if i + 1 == len {
                parity_budget
            } else {
                let t = rng.chance(0.25);
                if t {
                    parity_budget = !parity_budget;
                }
                t
            };
            gluings.push(Gluing {
                a: (base + i, 1),
                b: (base + (i + 1) % len, 0),
                twisted,
            });
        }
        let essential = rng.chance(0.4);
        ann.insert(
            base,
            if essential { Essentiality::Essential } else { Essentiality::Inessential },
        );
    }

    // Chains with random end treatments.
    for _ in 0..rng.below(3) {
        let len = rng.below(4) as usize + 1;
        let base = next_id;
        for _ in 0..len {
            let id = next_id;
            next_id += 1;
            handles.push(Handle {
                id,
                kind: HandleKind::H1,
                triangle: tri,
                sides: vec![0, 1],
                arcs: vec![arc(rng), arc(rng)],
            });
            tri += 1;
        }
        for i in 0..len - 1 {
            gluings.push(Gluing {
                a: (base + i, 1),
                b: (base + i + 1, 0),
                twisted: rng.chance(0.2),
            });
        }
        for (end_germ, flip) in [((base, 0u8), false), ((base + len - 1, 1u8), true)] {
            let _ = flip;
            match rng.below(3) {
                // H0 cap.
                0 => {
                    let id = next_id;
                    next_id += 1;
                    handles.push(Handle {
                        id,
                        kind: HandleKind::H0,
                        triangle: tri,
                        sides: vec![0],
                        arcs: vec![arc(rng)],
                    });
                    tri += 1;
                    gluings.push(Gluing { a: (id, 0), b: end_germ, twisted: rng.chance(0.2) });
                }
                // Attach to a free monkey germ when one is left.
                1 if !monkey_germs.is_empty() => {
                    let germ = monkey_germs.remove(0);
                    gluings.push(Gluing { a: germ, b: end_germ, twisted: rng.chance(0.2) });
                }
                // Leave the end free.
                _ => {}
            }
        }
    }

    // Glued 0-handle pairs.
    for _ in 0..rng.below(2) {
        let a = next_id;
        let b = next_id + 1;
        next_id += 2;
        for id in [a, b] {
            handles.push(Handle {
                id,
                kind: HandleKind::H0,
                triangle: tri,
                sides: vec![0],
                arcs: vec![arc(rng)],
            });
            tri += 1;
        }
        gluings.push(Gluing { a: (a, 0), b: (b, 0), twisted: rng.chance(0.3) });
    }

    let t = tri.max(1);
    HandleComplex::new(t, 3 * t as u64, handles, gluings, ann).expect("valid random scenario")
}
