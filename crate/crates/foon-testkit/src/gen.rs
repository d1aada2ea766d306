//! Seeded random FOON instances.

use foon_core::graph::FoonGraph;
use foon_core::merge::merge_units;
use foon_core::model::{FunctionalUnit, GoalSpec, Kitchen, MotionNode, ObjectNode};
use foon_core::rates::MotionRateTable;
use rand::seq::SliceRandom;
use rand::Rng;

/// A complete search problem: graph, kitchen, rates, and goal.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: FoonGraph,
    pub kitchen: Kitchen,
    pub rates: MotionRateTable,
    pub goal: GoalSpec,
}

const MOTION_POOL: [&str; 4] = ["m0", "m1", "m2", "m3"];
const STATE_POOL: [&str; 3] = ["raw", "mixed", "hot"];
const INGREDIENT_POOL: [&str; 4] = ["salt", "pepper", "oil", "sugar"];

fn random_vocabulary<R: Rng>(rng: &mut R) -> Vec<ObjectNode> {
    let size = rng.gen_range(4..=9);
    (0..size)
        .map(|i| {
            let name = format!("item{i}");
            let states: Vec<&str> = if rng.gen_bool(0.3) {
                vec![STATE_POOL[rng.gen_range(0..STATE_POOL.len())]]
            } else {
                Vec::new()
            };
            let ingredients: Vec<&str> = if rng.gen_bool(0.2) {
                let count = rng.gen_range(1..=3);
                let mut pool = INGREDIENT_POOL.to_vec();
                pool.shuffle(rng);
                pool.truncate(count);
                pool
            } else {
                Vec::new()
            };
            ObjectNode::new(&name, states, ingredients).unwrap()
        })
        .collect()
}

fn random_rates<R: Rng>(rng: &mut R) -> MotionRateTable {
    let mut rates = MotionRateTable::new();
    for name in MOTION_POOL {
        let rate = (rng.gen_range(5..=95) as f64) / 100.0;
        rates.insert(&MotionNode::new(name).unwrap(), rate).unwrap();
    }
    rates
}

fn sample_distinct<R: Rng>(rng: &mut R, vocab: &[ObjectNode], count: usize) -> Vec<ObjectNode> {
    let mut pool: Vec<ObjectNode> = vocab.to_vec();
    pool.shuffle(rng);
    pool.truncate(count.min(vocab.len()).max(1));
    pool
}

/// A batch of random units over a small shared vocabulary. Duplicates occur
/// naturally; callers that need planted duplicates can copy units across
/// batches.
pub fn random_units<R: Rng>(rng: &mut R, count: usize) -> Vec<FunctionalUnit> {
    let vocab = random_vocabulary(rng);
    (0..count)
        .map(|_| {
            let input_count = rng.gen_range(1..=3);
            let inputs = sample_distinct(rng, &vocab, input_count);
            let output_count = rng.gen_range(1..=2);
            let outputs = sample_distinct(rng, &vocab, output_count);
            let motion = MOTION_POOL[rng.gen_range(0..MOTION_POOL.len())];
            FunctionalUnit::new(inputs, MotionNode::new(motion).unwrap(), outputs).unwrap()
        })
        .collect()
}

/// An unconstrained random instance: multiple producers, shared objects,
/// cycles, and unsatisfiable goals all occur.
pub fn random_instance<R: Rng>(rng: &mut R, max_units: usize) -> Instance {
    let vocab = random_vocabulary(rng);
    let unit_count = rng.gen_range(1..=max_units.max(1));
    let units: Vec<FunctionalUnit> = (0..unit_count)
        .map(|_| {
            let input_count = rng.gen_range(1..=3);
            let inputs = sample_distinct(rng, &vocab, input_count);
            let output_count = rng.gen_range(1..=2);
            let outputs = sample_distinct(rng, &vocab, output_count);
            let motion = MOTION_POOL[rng.gen_range(0..MOTION_POOL.len())];
            FunctionalUnit::new(inputs, MotionNode::new(motion).unwrap(), outputs).unwrap()
        })
        .collect();
    let (graph, _) = merge_units(FoonGraph::new(), units);

    let kitchen = Kitchen::from_items(
        vocab
            .iter()
            .filter(|_| rng.gen_bool(0.35))
            .cloned(),
    );

    let target = &vocab[rng.gen_range(0..vocab.len())];
    let goal = if rng.gen_bool(0.5) {
        GoalSpec::new(target.name(), target.states().collect::<Vec<_>>()).unwrap()
    } else {
        GoalSpec::new(target.name(), [] as [&str; 0]).unwrap()
    };

    Instance {
        graph,
        kitchen,
        rates: random_rates(rng),
        goal,
    }
}

/// A feasible instance in which every object has at most one producer, so
/// every policy must retrieve the same units.
pub fn random_single_producer_instance<R: Rng>(rng: &mut R, max_units: usize) -> Instance {
    let object_count = rng.gen_range(3..=(max_units + 2).max(3));
    let objects: Vec<ObjectNode> = (0..object_count)
        .map(|i| ObjectNode::bare(&format!("sp{i}")).unwrap())
        .collect();

    // Objects are topologically ordered by index; an object may gain one
    // producer drawing from strictly earlier objects.
    let mut units = Vec::new();
    let mut produced = vec![false; object_count];
    for i in 1..object_count {
        if units.len() >= max_units || rng.gen_bool(0.25) {
            continue;
        }
        let input_count = rng.gen_range(1..=2.min(i));
        let mut earlier: Vec<usize> = (0..i).collect();
        earlier.shuffle(rng);
        let inputs: Vec<ObjectNode> = earlier
            .into_iter()
            .take(input_count)
            .map(|j| objects[j].clone())
            .collect();
        let motion = MOTION_POOL[rng.gen_range(0..MOTION_POOL.len())];
        units.push(
            FunctionalUnit::new(inputs, MotionNode::new(motion).unwrap(), vec![objects[i].clone()])
                .unwrap(),
        );
        produced[i] = true;
    }

    // Everything without a producer is kitchen stock, which makes every
    // object reachable.
    let kitchen = Kitchen::from_items(
        objects
            .iter()
            .enumerate()
            .filter(|(i, _)| !produced[*i])
            .map(|(_, o)| o.clone()),
    );

    let goal_index = produced
        .iter()
        .rposition(|&p| p)
        .unwrap_or(object_count - 1);
    let goal = GoalSpec::new(objects[goal_index].name(), [] as [&str; 0]).unwrap();

    let (graph, _) = merge_units(FoonGraph::new(), units);
    Instance {
        graph,
        kitchen,
        rates: random_rates(rng),
        goal,
    }
}

/// A single-producer chain of the given depth: the goal sits `depth` units
/// away from the one kitchen item.
pub fn chain_instance(depth: usize) -> Instance {
    assert!(depth >= 1);
    let objects: Vec<ObjectNode> = (0..=depth)
        .map(|i| ObjectNode::bare(&format!("link{i}")).unwrap())
        .collect();
    let units: Vec<FunctionalUnit> = (0..depth)
        .map(|i| {
            FunctionalUnit::new(
                vec![objects[i].clone()],
                MotionNode::new(&format!("step{i}")).unwrap(),
                vec![objects[i + 1].clone()],
            )
            .unwrap()
        })
        .collect();
    let (graph, _) = merge_units(FoonGraph::new(), units);
    Instance {
        graph,
        kitchen: Kitchen::from_items([objects[0].clone()]),
        rates: MotionRateTable::new(),
        goal: GoalSpec::new(objects[depth].name(), [] as [&str; 0]).unwrap(),
    }
}

/// A complete AND-tree: every non-leaf object has exactly one producer whose
/// inputs are `branching` fresh objects one level down; leaves are kitchen
/// stock. Exercises frontier growth without any OR-choices.
pub fn and_tree_instance(branching: usize, depth: usize) -> Instance {
    assert!(branching >= 1 && depth >= 1);
    let root = ObjectNode::bare("root").unwrap();
    let mut units = Vec::new();
    let mut kitchen_items = Vec::new();
    let mut level = vec![root.clone()];
    for d in 0..depth {
        let mut next_level = Vec::new();
        for (i, parent) in level.iter().enumerate() {
            let children: Vec<ObjectNode> = (0..branching)
                .map(|b| ObjectNode::bare(&format!("n{}_{i}_{b}", d + 1)).unwrap())
                .collect();
            units.push(
                FunctionalUnit::new(
                    children.clone(),
                    MotionNode::new(&format!("combine{d}_{i}")).unwrap(),
                    vec![parent.clone()],
                )
                .unwrap(),
            );
            if d + 1 == depth {
                kitchen_items.extend(children.clone());
            }
            next_level.extend(children);
        }
        level = next_level;
    }
    let (graph, _) = merge_units(FoonGraph::new(), units);
    Instance {
        graph,
        kitchen: Kitchen::from_items(kitchen_items),
        rates: MotionRateTable::new(),
        goal: GoalSpec::new("root", [] as [&str; 0]).unwrap(),
    }
}
