//! Tarjan strongly connected components over a dense arc predicate.

struct State {
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

/// Components are returned with vertices sorted ascending; component order
/// is Tarjan discovery order (callers re-sort by the condensation order).
pub(crate) fn tarjan_scc(n: usize, arc: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut state = State {
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if state.idx[v].is_none() {
            strongconnect(v, n, arc, &mut state);
        }
    }
    for comp in &mut state.comps {
        comp.sort_unstable();
    }
    state.comps
}

fn strongconnect(v: usize, n: usize, arc: &dyn Fn(usize, usize) -> bool, state: &mut State) {
    state.idx[v] = Some(state.index);
    state.low[v] = state.index;
    state.index += 1;
    state.stack.push(v);
    state.on_stack[v] = true;

    for w in 0..n {
        if w == v || !arc(v, w) {
            continue;
        }
        if state.idx[w].is_none() {
            strongconnect(w, n, arc, state);
            state.low[v] = state.low[v].min(state.low[w]);
        } else if state.on_stack[w] {
            state.low[v] = state.low[v].min(state.idx[w].unwrap());
        }
    }

    if state.low[v] == state.idx[v].unwrap() {
        let mut comp = Vec::new();
        loop {
            let w = state.stack.pop().expect("stack underflow");
            state.on_stack[w] = false;
            comp.push(w);
            if w == v {
                break;
            }
        }
        state.comps.push(comp);
    }
}
