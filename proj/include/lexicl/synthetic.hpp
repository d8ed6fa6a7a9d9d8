/*
 * Copyright 2026 The lexicl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Small synthetic corpus built from template variants and entity pools, for
// tests and demos when no annotated corpus is at hand. Four legal issues form
// four topical clusters; each template can be instantiated several times so
// splits have to keep shared-template records together.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lexicl/dataset.hpp"
#include "lexicl/templates.hpp"

namespace lexicl::synthetic {

struct IssueSpec {
  std::string issue;
  ContractType contract;
  std::string rules;
  /// Sentence alternatives per position; a template picks one per position.
  std::vector<std::vector<std::string>> sentences;
  /// Fact patterns; placeholders are filled from the same entity map.
  std::vector<std::string> facts;
  /// Entity type -> candidate values.
  std::vector<std::pair<std::string, std::vector<std::string>>> pools;
};

inline const std::vector<IssueSpec>& issues() {
  static const std::vector<IssueSpec> kIssues = {
      {"The borrower's misuse of lent assets damaged the lender's rights and reputation.",
       ContractType::Loan,
       "right_to_legal_action(_Lender, _Borrower, _Object) <= harm_to_lender_rights(_Borrower, _Lender, _Object), "
       "discovery_of_harm(_Lender, _Object, _T_discovery).",
       {{"{Object} was given to {Borrower} by {Lender} as part of {Agreement}, meant for patient treatment.",
         "{Lender} lent {Object} to {Borrower} under {Agreement} for temporary use.",
         "Under {Agreement}, {Borrower} received {Object} from {Lender} on loan."},
        {"Instead, {Borrower} redistributed the items to third parties without consent.",
         "However, {Borrower} used the property for purposes outside the agreed scope.",
         "{Borrower} then rented the property out to others for profit."},
        {"This resulted in {Harm}.", "As a consequence, {Lender} suffered {Harm}."},
        {"These actions were discovered on {T_discovery}. Does {Lender} have grounds for legal action to protect "
         "their reputation?",
         "{Lender} learned of this on {T_discovery}. Can {Lender} take legal action?"}},
       {"borrower(\"{Borrower}\").", "lender(\"{Lender}\").", "owned_by(\"{Object}\",\"{Lender}\").",
        "borrowing_agreement(\"{Agreement}\").", "agreement_fact(\"{Borrower}\",\"{Object}\",\"{Agreement}\").",
        "violation_of_agreement(\"{Borrower}\",\"{Agreement}\").", "harm_fact(\"{Harm}\",\"{Lender}\").",
        "discovery_fact(\"{Lender}\",\"{Object}\",\"{T_discovery}\")."},
       {{"Borrower", {"Mason Reid", "Olivia Hart", "Noah Brandt", "Ava Quinn", "Liam Porter", "Sofia Marsh"}},
        {"Lender", {"Emma Larsen", "Lucas Vega", "Chloe Novak", "Henry Doyle", "Grace Whitfield", "Oscar Lindqvist"}},
        {"Object", {"medical supplies", "a delivery van", "camera equipment", "a sailboat", "office furniture",
                    "a diesel generator"}},
        {"Agreement", {"a supply agreement", "loan agreement LA-17", "equipment loan 9", "loan note 5521",
                       "a custody arrangement"}},
        {"Harm", {"a shortage of supplies during a critical time", "lost client bookings worth 4000 dollars",
                  "a cancelled trade exhibition", "public criticism from regular customers"}},
        {"T_discovery", {"2023/08/20", "2023/06/30", "2024/02/11", "2022/11/05"}}}},

      {"The lessee's damage to leased property gives the lessor a claim for repair costs.",
       ContractType::Lease,
       "repair_obligation(_Lessee, _Lessor, _Item) <= lessee(_Lessee), lessor(_Lessor), owned_by(_Item, _Lessor), "
       "damage_fact(_Lessee, _Item, _Damage).",
       {{"{Lessor} leased {Item} to {Lessee} under {Lease}.",
         "Under {Lease}, {Lessee} rented {Item} owned by {Lessor}.",
         "{Lessee} took {Item} on lease from {Lessor} through {Lease}."},
        {"During the rental period, {Lessee} caused {Damage}.",
         "While in use, the rented property suffered {Damage} caused by {Lessee}.",
         "{Lessee} accidentally inflicted {Damage}."},
        {"{Lessor} demanded payment for repairs from {Lessee}.", "{Lessor} asked {Lessee} to cover the repair costs."},
        {"The repair request was sent on {T_request}. Can {Lessee} dispute the repair demand?",
         "On {T_request} the demand was formally issued. Is {Lessee} obliged to pay?"}},
       {"lessee(\"{Lessee}\").", "lessor(\"{Lessor}\").", "owned_by(\"{Item}\",\"{Lessor}\").",
        "lease_agreement(\"{Lease}\").", "damage_fact(\"{Lessee}\",\"{Item}\",\"{Damage}\").",
        "repair_request_fact(\"{Lessor}\",\"{Lessee}\",\"{Item}\",\"{T_request}\")."},
       {{"Lessee", {"Jacob Whitlow", "Mia Castell", "Daniel Ferro", "Harper Quist", "Leo Sandoval", "Nora Pike"}},
        {"Lessor", {"Amelia Strand", "Victor Hale", "Ruby Okafor", "Samuel Imhof", "Ivy Lautner", "Caleb Dunmore"}},
        {"Item", {"a laptop", "a concert piano", "a forklift", "an espresso machine", "a drone kit", "a tent canopy"}},
        {"Lease", {"lease78", "rental agreement R-204", "lease contract 3311", "short-term lease Q9"}},
        {"Damage", {"a cracked display panel", "water damage to the casing", "a broken hydraulic arm",
                    "scratches across the lid"}},
        {"T_request", {"2024/01/10", "2023/09/14", "2024/03/22", "2023/12/01"}}}},

      {"The seller's delivery of defective goods entitles the buyer to cancel the sale.",
       ContractType::Purchase,
       "right_to_cancel(_Buyer, _Seller, _Goods) <= buyer(_Buyer), seller(_Seller), "
       "sales_contract(_Contract, _Buyer, _Seller), defect_fact(_Goods, _Defect).",
       {{"{Buyer} purchased {Goods} from {Seller} under {Contract}.",
         "{Seller} sold {Goods} to {Buyer} pursuant to {Contract}.",
         "Through {Contract}, {Buyer} bought {Goods} supplied by {Seller}."},
        {"The goods were delivered on {T_delivery}.", "Delivery took place on {T_delivery}."},
        {"Upon inspection, {Buyer} found {Defect}.", "Shortly after delivery the goods showed {Defect}.",
         "{Buyer} discovered {Defect} during installation."},
        {"Can {Buyer} cancel the contract and demand a refund?", "Is {Seller} liable for the defect?"}},
       {"buyer(\"{Buyer}\").", "seller(\"{Seller}\").", "sales_contract(\"{Contract}\",\"{Buyer}\",\"{Seller}\").",
        "delivered(\"{Goods}\",\"{T_delivery}\").", "defect_fact(\"{Goods}\",\"{Defect}\")."},
       {{"Buyer", {"Aria Tennant", "Owen Blackwood", "Layla Fenwick", "Miles Okonkwo", "Stella Varga", "Jonah Rask"}},
        {"Seller", {"Brightline Motors", "Kestrel Appliances", "Northwind Timber", "Pellucid Optics",
                    "Garnet Tools Ltd", "Orchard Farms Co"}},
        {"Goods", {"twelve solar panels", "a refrigerated truck", "forty oak beams", "a batch of lenses",
                   "an industrial lathe", "three tons of apples"}},
        {"Contract", {"sales contract SC-88", "purchase order 7719", "supply deal 12B", "invoice agreement 450"}},
        {"Defect", {"hairline fractures in the frames", "a faulty cooling unit", "rot in several pieces",
                    "misaligned optical coatings"}},
        {"T_delivery", {"2023/05/02", "2024/04/18", "2023/10/27", "2022/07/09"}}}},

      {"The licensee's use of a work beyond the license infringes the author's copyright.",
       ContractType::Copyright,
       "infringement(_Author, _Infringer, _Work) <= copyright_holder(_Author, _Work), "
       "license_agreement(_License, _Author, _Infringer), unauthorized_use(_Infringer, _Work, _Use).",
       {{"{Author} created {Work} and granted {License} to {Infringer}.",
         "{Infringer} obtained {License} from {Author} covering {Work}.",
         "Under {License}, {Infringer} could display {Work} authored by {Author}."},
        {"{Infringer} went beyond the license by {Use}.", "Later, {Infringer} engaged in {Use} without permission.",
         "The licensee exceeded its rights through {Use} by {Infringer}."},
        {"{Author} sent a notice on {T_notice}.", "A formal complaint was filed on {T_notice}."},
        {"Does {Author} have a claim for copyright infringement?", "Can {Author} terminate the license?"}},
       {"author(\"{Author}\").", "copyright_holder(\"{Author}\",\"{Work}\").",
        "license_agreement(\"{License}\",\"{Author}\",\"{Infringer}\").",
        "unauthorized_use(\"{Infringer}\",\"{Work}\",\"{Use}\").", "notice_fact(\"{Author}\",\"{T_notice}\")."},
       {{"Author", {"Elena Marchetti", "Tobias Lindgren", "Priya Raman", "Hugo Albrecht", "Yara Souza", "Kenji Ito"}},
        {"Infringer", {"Bluefin Media", "Cobalt Press", "Driftwood Studios", "Ember Games", "Falcon Prints",
                       "Granite Records"}},
        {"Work", {"the novel Salt Harbor", "a photo series on glaciers", "the song Paper Lanterns",
                  "a font family called Meridian", "an illustrated cookbook"}},
        {"License", {"a display license", "license L-2020-5", "a limited print permit", "streaming license 77"}},
        {"Use", {"selling merchandise with the artwork", "reprinting ten thousand copies",
                 "using the track in advertising", "embedding the font in paid apps"}},
        {"T_notice", {"2023/03/15", "2024/06/01", "2022/12/19", "2023/11/08"}}}},
  };
  return kIssues;
}

struct Options {
  std::uint64_t seed = 7;
  std::size_t templates_per_issue = 8;
  std::size_t instances_per_template = 3;
};

/// Enumerates sentence combinations in mixed-radix order, spreading the
/// chosen templates across the combination space with a stride.
inline std::vector<std::string> template_variants(const IssueSpec& spec, std::size_t count) {
  std::size_t total = 1;
  for (const auto& alts : spec.sentences) total *= alts.size();
  count = std::min(count, total);
  std::vector<std::string> out;
  std::size_t stride = 1;
  for (std::size_t s = total / std::max<std::size_t>(count, 1); s >= 1; --s) {
    if (std::gcd(s, total) == 1) {
      stride = s;
      break;
    }
  }
  for (std::size_t t = 0; t < count; ++t) {
    std::size_t code = (t * stride) % total;
    std::string text;
    for (const auto& alts : spec.sentences) {
      if (!text.empty()) text += ' ';
      text += alts[code % alts.size()];
      code /= alts.size();
    }
    out.push_back(std::move(text));
  }
  return out;
}

inline std::vector<Record> generate(const Options& opt = {}) {
  SplitMix64 rng(opt.seed);
  std::vector<Record> out;
  std::size_t issue_no = 0;
  for (const IssueSpec& spec : issues()) {
    ++issue_no;
    const auto variants = template_variants(spec, opt.templates_per_issue);
    for (std::size_t t = 0; t < variants.size(); ++t) {
      const Template tpl = parse_template(variants[t]);
      for (std::size_t k = 0; k < opt.instances_per_template; ++k) {
        EntityMap entities;
        for (const auto& [type, values] : spec.pools) {
          entities[type] = values[static_cast<std::size_t>(rng.uniform_below(values.size()))];
        }
        Record r;
        r.id = "syn-" + std::to_string(issue_no) + "-" + std::to_string(t) + "-" + std::to_string(k);
        r.legal_issue = spec.issue;
        r.contract_type = spec.contract;
        r.template_text = variants[t];
        r.case_text = instantiate(tpl, entities).text;
        std::string facts;
        for (const std::string& pattern : spec.facts) {
          facts += instantiate(parse_template(pattern), entities).text;
          facts += '\n';
        }
        r.facts = parse_fact_set(facts);
        r.rules = parse_rule_text(spec.rules);
        // Only the entities the template actually mentions belong to the case.
        for (const std::string& type : tpl.entity_types()) r.entities[type] = entities.at(type);
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

}  // namespace lexicl::synthetic
