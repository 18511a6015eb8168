#include "compass/embedding/model_json.hpp"

#include "compass/core/error.hpp"

namespace compass {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorKind::validation, std::string(where) + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ErrorKind::validation,
             std::string(where) + ": field '" + key + "' has the wrong type (" + e.what() + ")");
    }
}

}  // namespace

json to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j) {
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
            ErrorKind::validation, "coordinate must be a [x, y] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const UmapParams& p) {
    return {
        {"n_neighbors", p.n_neighbors},
        {"min_dist", p.min_dist},
        {"spread", p.spread},
        {"metric", to_string(p.metric)},
        {"n_epochs", p.n_epochs},
        {"negative_sample_rate", p.negative_sample_rate},
        {"initial_learning_rate", p.initial_learning_rate},
        {"seed", p.seed},
    };
}

UmapParams params_from_json(const json& j) {
    constexpr const char* where = "params";
    UmapParams p;
    p.n_neighbors = field<int>(j, "n_neighbors", where);
    p.min_dist = field<double>(j, "min_dist", where);
    p.spread = field<double>(j, "spread", where);
    p.metric = metric_from_string(field<std::string>(j, "metric", where));
    p.n_epochs = field<int>(j, "n_epochs", where);
    p.negative_sample_rate = field<int>(j, "negative_sample_rate", where);
    p.initial_learning_rate = field<double>(j, "initial_learning_rate", where);
    p.seed = field<std::uint64_t>(j, "seed", where);
    try {
        p.validate();
    } catch (const Error& e) {
        fail(ErrorKind::validation, std::string("params: ") + e.what());
    }
    return p;
}

json to_json(const UmapModel& m) {
    json vectors = json::array();
    for (std::size_t i = 0; i < m.training.rows(); ++i) {
        const auto row = m.training.row(i);
        vectors.push_back(json(std::vector<float>(row.begin(), row.end())));
    }
    json coords = json::array();
    for (const auto& p : m.coords) coords.push_back(to_json(p));

    return {
        {"params", to_json(m.params)},
        {"training_ids", m.training_ids},
        {"dim", m.training.dim()},
        {"training_vectors", std::move(vectors)},
        {"knn", {{"n", m.knn.n}, {"k", m.knn.k}, {"indices", m.knn.indices}, {"distances", m.knn.distances}}},
        {"fuzzy",
         {{"n", m.fuzzy.n},
          {"row_ptr", m.fuzzy.row_ptr},
          {"cols", m.fuzzy.cols},
          {"weights", m.fuzzy.weights},
          {"rho", m.fuzzy.rho},
          {"sigma", m.fuzzy.sigma}}},
        {"coords", std::move(coords)},
        {"a", m.a},
        {"b", m.b},
    };
}

UmapModel model_from_json(const json& j) {
    constexpr const char* where = "model";
    require(j.is_object(), ErrorKind::validation, "model must be a JSON object");
    UmapModel m;
    m.params = params_from_json(j.at("params"));
    m.training_ids = field<std::vector<std::string>>(j, "training_ids", where);
    const auto dim = field<std::size_t>(j, "dim", where);

    const auto& vecs = j.contains("training_vectors") ? j.at("training_vectors") : json();
    require(vecs.is_array() && vecs.size() == m.training_ids.size(), ErrorKind::validation,
            "model: training_vectors must have one row per training id");
    std::vector<float> data;
    data.reserve(vecs.size() * dim);
    for (const auto& row : vecs) {
        require(row.is_array() && row.size() == dim, ErrorKind::validation,
                "model: training vector length != dim");
        for (const auto& v : row) {
            require(v.is_number(), ErrorKind::validation, "model: training vector value not a number");
            data.push_back(v.get<float>());
        }
    }
    m.training = EmbeddingMatrix(vecs.size(), dim, std::move(data));

    const auto& knn = j.at("knn");
    m.knn.n = field<std::size_t>(knn, "n", "model.knn");
    m.knn.k = field<std::size_t>(knn, "k", "model.knn");
    m.knn.indices = field<std::vector<std::uint32_t>>(knn, "indices", "model.knn");
    m.knn.distances = field<std::vector<double>>(knn, "distances", "model.knn");

    const auto& fz = j.at("fuzzy");
    m.fuzzy.n = field<std::size_t>(fz, "n", "model.fuzzy");
    m.fuzzy.row_ptr = field<std::vector<std::size_t>>(fz, "row_ptr", "model.fuzzy");
    m.fuzzy.cols = field<std::vector<std::uint32_t>>(fz, "cols", "model.fuzzy");
    m.fuzzy.weights = field<std::vector<double>>(fz, "weights", "model.fuzzy");
    m.fuzzy.rho = field<std::vector<double>>(fz, "rho", "model.fuzzy");
    m.fuzzy.sigma = field<std::vector<double>>(fz, "sigma", "model.fuzzy");

    const auto& coords = j.contains("coords") ? j.at("coords") : json();
    require(coords.is_array(), ErrorKind::validation, "model: coords must be an array");
    for (const auto& c : coords) m.coords.push_back(point_from_json(c));
    m.a = field<double>(j, "a", where);
    m.b = field<double>(j, "b", where);

    m.validate();
    return m;
}

}  // namespace compass
