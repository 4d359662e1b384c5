#include "ppxgb/setup.hpp"

#include <stdexcept>

#include "ppxgb/parallel.hpp"

namespace ppxgb {

unsigned she_bits_for_k(unsigned k) {
    switch (k) {
        case 80: return 512;
        case 128: return 2048;
        case 256: return 3072;
        default:
            throw std::invalid_argument("setup: unsupported security parameter");
    }
}

EncCart encrypt_tree(const Cart& tree, const OpeKey& ope_key, const PrfKey& prf_key,
                     const OpeParams& ope_params, const EncodingParams& encoding,
                     const ShePublicKey& pk, double base_fold, int threads,
                     RandomSource& rng) {
    EncCart out;
    out.root = tree.root;
    out.depth = tree.depth;
    out.nodes.resize(tree.nodes.size());
    const int nthreads = resolve_threads(threads);

    auto encrypt_node = [&](std::size_t i, RandomSource& node_rng) {
        const CartNode& src = tree.nodes[i];
        EncNode& dst = out.nodes[i];
        dst.id = src.id;
        if (src.is_leaf) {
            dst.is_leaf = true;
            int64_t q;
            try {
                q = quantize_score(src.leaf_score + base_fold, encoding);
            } catch (const std::out_of_range& e) {
                throw std::out_of_range("leaf node " + std::to_string(src.id) + ": " + e.what());
            }
            dst.score_ct = she_encrypt(pk, encode_signed(q, pk.n, encoding), node_rng);
            return;
        }
        dst.pseudonym = pseudonym(prf_key, src.feature);
        uint64_t q;
        try {
            q = quantize_feature(src.threshold, encoding);
        } catch (const std::out_of_range& e) {
            throw std::out_of_range("internal node " + std::to_string(src.id) + ": " + e.what());
        }
        dst.threshold_ct = ope_encrypt(ope_key, ope_params, q);
        dst.yes = src.yes;
        dst.no = src.no;
        dst.missing = src.missing;
    };

    if (nthreads <= 1) {
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) encrypt_node(i, rng);
        return out;
    }

    std::exception_ptr failure;
#pragma omp parallel num_threads(nthreads)
    {
        SystemRandom thread_rng;
#pragma omp for schedule(dynamic, 8)
        for (long i = 0; i < static_cast<long>(tree.nodes.size()); ++i) {
            try {
                encrypt_node(static_cast<std::size_t>(i), thread_rng);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::pair<EncryptedModel, KeyBundle> setup_user(const PlaintextModel& model,
                                                const SetupParams& params,
                                                const std::string& user_id,
                                                RandomSource& rng) {
    if (model.trees.empty())
        throw std::invalid_argument("setup_user: model has no trees");
    params.encoding.validate();
    params.ope_params.validate();
    const unsigned she_bits =
        params.she_modulus_bits != 0 ? params.she_modulus_bits : she_bits_for_k(params.k);
    // One sign bit plus room for max_leaf_terms summands must fit under n.
    {
        unsigned need = params.encoding.score_scale_bits;
        uint64_t terms = params.encoding.max_leaf_terms;
        while (terms > 1) {
            ++need;
            terms >>= 1;
        }
        need += 64;  // worst-case quantized score magnitude
        if (need >= she_bits)
            throw std::invalid_argument("setup_user: encoding params overflow the SHE modulus");
    }

    KeyBundle bundle;
    bundle.user_id = user_id;
    bundle.ope_key = ope_keygen(params.k, rng);
    bundle.prf_key = prf_keygen(params.k, rng);
    auto [pk, sk] = she_keygen_bits(she_bits, rng);
    bundle.she_private = sk;
    bundle.alpha = model.alpha;
    bundle.objective = model.objective;
    bundle.num_classes = model.num_classes;
    bundle.encoding = params.encoding;
    bundle.ope_params = params.ope_params;

    const PlaintextModel* source = &model;
    PlaintextModel padded;
    if (params.pad) {
        std::mt19937_64 pad_rng(rng.u64());
        padded = pad_model(model, pad_rng);
        source = &padded;
    }

    EncryptedModel encml;
    encml.user_id = user_id;
    encml.she_public = pk;
    encml.objective = model.objective;
    encml.num_classes = model.num_classes;
    encml.encoding = params.encoding;
    encml.ope_params = params.ope_params;
    const int classes = model.objective == Objective::softmax ? model.num_classes : 1;
    encml.trees.reserve(source->trees.size());
    for (std::size_t i = 0; i < source->trees.size(); ++i) {
        // The model-wide base score rides on the first tree of each class.
        const double base_fold = static_cast<int>(i) < classes ? model.base_score : 0.0;
        encml.trees.push_back(encrypt_tree(source->trees[i], bundle.ope_key, bundle.prf_key,
                                           params.ope_params, params.encoding, pk, base_fold,
                                           params.threads, rng));
    }
    return {std::move(encml), std::move(bundle)};
}

}  // namespace ppxgb
