#ifndef COUNTQA_QUERY_COMPONENTS_H_
#define COUNTQA_QUERY_COMPONENTS_H_

#include <string_view>

#include "countqa/providers.h"
#include "countqa/types.h"

namespace countqa {

// Fills answer type, entities, relation and context terms from the tagger's
// output:
//   answer type  first noun with its contiguous preceding adjectives
//   entities     runs of proper nouns
//   relation     the root token when it is a verb
//   context      every other token except conjunctions, determiners,
//                auxiliaries, pronouns, punctuation and wh-words
// Components may come back empty. Surface forms are preserved.
// Throws ContractError on an empty query. A null tagger selects the
// bundled lexical tagger.
CountQuery DeriveQueryComponents(std::string_view query_text, const PosTagger *tagger,
                                 std::string_view id = "");

}  // namespace countqa

#endif  // COUNTQA_QUERY_COMPONENTS_H_
