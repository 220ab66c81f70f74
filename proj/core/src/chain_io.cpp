#include <fstream>
#include <iomanip>
#include <sstream>

#include "dpln/gibbs.hpp"

namespace dpln {

void save_chain(std::ostream& os, const Chain& chain) {
    os << "# dpln chain v1\n";
    const PriorSpec& p = chain.prior;
    os << std::setprecision(17);
    os << "# prior m=" << p.m << " k=" << p.k << " a=" << p.a << " b=" << p.b
       << " c_alpha=" << p.c_alpha << " d_alpha=" << p.d_alpha
       << " c_beta=" << p.c_beta << " d_beta=" << p.d_beta << "\n";
    os << "# config iterations=" << chain.config.iterations
       << " burn_in=" << chain.config.burn_in << " thin=" << chain.config.thin
       << " seed=" << chain.config.seed << "\n";
    os << "# data_digest=" << std::hex << chain.digest << std::dec << "\n";
    os << "# alpha beta nu tau2\n";
    for (const auto& d : chain.draws)
        os << d.alpha << '\t' << d.beta << '\t' << d.nu << '\t' << d.tau2 << '\n';
}

namespace {

// Pull "key=value" tokens out of a header comment line.
void parse_kv(const std::string& line, Chain& chain) {
    std::istringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        PriorSpec& p = chain.prior;
        GibbsConfig& c = chain.config;
        if (key == "m") p.m = std::stod(val);
        else if (key == "k") p.k = std::stod(val);
        else if (key == "a") p.a = std::stod(val);
        else if (key == "b") p.b = std::stod(val);
        else if (key == "c_alpha") p.c_alpha = std::stod(val);
        else if (key == "d_alpha") p.d_alpha = std::stod(val);
        else if (key == "c_beta") p.c_beta = std::stod(val);
        else if (key == "d_beta") p.d_beta = std::stod(val);
        else if (key == "iterations") c.iterations = std::stoull(val);
        else if (key == "burn_in") c.burn_in = std::stoull(val);
        else if (key == "thin") c.thin = std::stoull(val);
        else if (key == "seed") c.seed = std::stoull(val);
        else if (key == "data_digest") chain.digest = std::stoull(val, nullptr, 16);
    }
}

}  // namespace

Chain load_chain(std::istream& is) {
    Chain chain;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            parse_kv(line, chain);
            continue;
        }
        std::istringstream ss(line);
        DplnParams d{};
        if (!(ss >> d.alpha >> d.beta >> d.nu >> d.tau2))
            throw std::runtime_error("load_chain: malformed row at line " + std::to_string(lineno));
        d.validate();
        chain.draws.push_back(d);
    }
    return chain;
}

void save_chain_file(const std::string& path, const Chain& chain) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_chain_file: cannot open " + path);
    save_chain(os, chain);
}

Chain load_chain_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_chain_file: cannot open " + path);
    return load_chain(is);
}

}  // namespace dpln
