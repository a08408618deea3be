#include "kerag/llm/template.hpp"

namespace kerag {

namespace {

const char* kEntityDomain = R"PROMPT(You are an agent only outputs JSON. You are given a Query and Query Time. Do the following:

1) Determine the domain the query is about. The domain should be one of the following: <<DOMAINS>>. If none of the domain applies, use "other". Use "domain" as the key in the result json.

2) Extract structured information from the query. Include different keys into the result json depending on the domains, and put them DIRECTLY in the result json. Here are the rules:

For `encyclopedia` and `other` queries, these are possible keys:

- `main_entity`: extract the main entity of the query.

For `finance` queries, these are possible keys:

- `market_identifier`: stock identifiers including individual company names, stock symbols.

- `metric`: financial metrics that the query is asking about. This must be one of the following: `price`, `dividend`, `P/E ratio`, `EPS`, `marketCap`, and `other`.

For `movie` queries, these are possible keys:

- `movie_name`: name of the movie

- `movie_aspect`: if the query is about a movie, which movie aspect the query asks. This must be one of the following: `budget`, `genres`, `original_language`, `original_title`, `release_date`, `revenue`, `title`, `cast`, `crew`, `rating`, `length`.

- `person`: person name related to movies

- `person_aspect`: if the query is about a person, which person aspect the query asks. This must be one of the following: `acted_movies`, `directed_movies`, `oscar_awards`, `birthday`.

- `year`: if the query is about movies released in a specific year, extract the year

For `music` queries, these are possible keys:
- `artist_name`: name of the artist

- `artist_aspect`: if the query is about an artist, extract the aspect of the artist. This must be one of the following: `member`, `birth place`, `birth date`, `lifespan`, `artist work`, `grammy award count`, `grammy award date`.

- `song_name`: name of the song

- `song_aspect`: if the query is about a song, extract the aspect of the song. This must be one of the following: `auther`, `grammy award count`, `release country`, `release date`.

For `sports` queries, these are possible keys:
- `sport_type`: one of `basketball`, `soccer`, `other`

- `tournament`: such as NBA, World Cup, Olympic.

- `team`: teams that user interested in.

<<ENTITY_MODE>>

Return the results in a FLAT json.

*NEVER include ANY EXPLANATION or NOTE in the output, ONLY OUTPUT JSON!!!*

Here are some examples:

### Query

what was the volume of trades for rcm on the last day?

Your extracted JSON should be: {"domain": "finance", "market_identifier": "rcm", "metric": "volume of trades"}

### Query

on 2022-10-11, how many points did bulls put up in their game?

Your extracted JSON should be: {"domain": "sports", "sport_type": "basketball", "team": "chicago bulls"}

### Query

<<QUERY>>

### Query Time

<<QUERY_TIME>>

Your extracted JSON should be: )PROMPT";

const char* kTimeCot = R"PROMPT(Please extract the time frame that user interested in. When datetime is not explicitly mentioned, use `Query Time` as default. Enclose your datetime extracted with <>! Use '~' to indicate time period.

Here are some examples:

### Query

what was the volume of trades for rcm on the last day?

### Query Time

02/28/2024, 08:04:08 PT

Question: What is the user interested time frame of the Query? Please think step by step.

Your output: Since the query is asking about the last day of the Query Time, the time frame should be <02/27/2024>.

### Query

which team did boston celtics take on in their matchup on 2023-05-29?

### Query Time

03/15/2024, 16:05:17 PT

Question: What is the user interested time frame of the Query? Please think step by step.

Your output: The time frame should be <05/29/2023>, which is explicitly stated in the Query.

### Query

on which date did sgml distribute dividends the first time?

### Query Time

02/28/2024, 08:25:10 PT

Question: What is the user interested time frame of the Query? Please think step by step.

Your output: The time frame should be <02/28/2024>. Since there is no datetime explicitly mentioned and we take the Query Time as the default answer.

### Query

what's the schedule looking like for west ham's next game in eng-premier league?

### Query Time

03/15/2024, 15:48:32 PT

Question: What is the user interested time frame of the Query? Please think step by step.

Your output: The time frame should be <03/15/2024 ~ future>. Since there is no datetime that can be confidently inferred from the query, we take the Query Time to (~) future time period as the answer.

### Query

on average, what was the daily high stock price of xpev over the past week?

### Query Time

02/28/2024, 08:17:40 PT

Question: What is the user interested time frame of the Query? Please think step by step.

Your output: The time frame should be <02/21/2024 ~ 02/28/2024>. Since the question is asking for the value over the past week. We take 02/21/2024 ~ 02/28/2024 time period as the answer.

### Query

<<QUERY>>

### Query Time

<<QUERY_TIME>>

Question: What is the user interested time frame of the Query? Please think step by step.

Your output: )PROMPT";

const char* kFilterTools = R"PROMPT(Given the user query with detected topic entity <<TOPIC_ENTITY>> and the current retrieval plan <<PLAN>>, you will have access to the following functions to perform additional hops based on the current plan. Decide which functions/predicates are relevant to answer the query and if the composed retrieval plan is sufficient for the question answering.

You have access to the following functions:

<<FUNCTIONS>>

    If you choose to call a function ONLY reply in the following format with no prefix or suffix, if you think you need to chain multiple function calls, reply the function that you want to call at the current round and a special token <CONTINUE>:

    Question: What is the price of ABCD currently?
    Your answer: <function=finance_get_detailed_price_history>{"ticker_name": "ABCD"}</function>

    Question: Can you tell me who directed the movie ABCD?
    Your answer: <function=movie_get_movie_info>{"movie_name": "ABCD"}</function>

    Question: Who are the release date of the last song of band ABCD?
    Your answer: <function=music_get_artist_all_works>{"band_name": "ABCD"}</function>; <CONTINUE>

    Reminder:

    - Function calls MUST follow the specified format, start with <function= and end with </function>

    - Put the entire function call reply on one line

    - If there is no function call available, answer I don't know.'

    - Reply <CONTINUE> after the function call you choose, seperate them with ;.

The current query time is: <<QUERY_TIME>>

Question: <<QUESTION>>)PROMPT";

const char* kHopBoundary = R"PROMPT(You will be given a QUESTION and a set of retrieved TRIPLEs from the knowledge graph. Your task is to indicate whether the currently retrieved content is sufficient for you to answer the QUESTION. If you need to have more retrieved triples, respond <NO>. If you think the subject entity is wrongly linked, respond <NA>. Otherwise, if you think the current information is sufficient, respond <YES>. Only answer <NO>/<NA>/<YES>!!!

QUESTION: <<QUESTION>>

TRIPLEs: <<TRIPLES>>)PROMPT";

const char* kSummarizeCot = R"PROMPT(Please provide a brief answer as short as possible to the question based on your own knowledge and the following relevant CONTENT extracted from Knowledge Base. Answer "I don't know" if you are not confident of your answer. Please think step by step.

The current query time is: <<QUERY_TIME>>.

<<QUESTION>>

CONTENT: <<CONTENT>>

End your response with a final line of the form `Answer: <your brief answer>`.)PROMPT";

const char* kSummarizePlain = R"PROMPT(Please provide a brief answer as short as possible to the question based on your own knowledge and the following relevant CONTENT extracted from Knowledge Base. Answer "I don't know" if you are not confident of your answer.

The current query time is: <<QUERY_TIME>>.

<<QUESTION>>

CONTENT: <<CONTENT>>)PROMPT";

const char* kJudgeCrag = R"PROMPT(Assume you are a human expert in grading predictions given by a model. You are given a question and a model prediction. Judge if the prediction matches the ground truth answer by following these steps:
1: Take it as granted that the Ground Truth is always correct.

2: If the Prediction indicates it is not sure about the answer, "score" should be "0"; otherwise, go the next step.

3: If the Prediction exactly matches the Ground Truth, "score" is 1.

4: If the Prediction does not exactly match the Ground Truth, go through the following steps and likely give a score as 0.

5: If the Ground Truth is a number, "score" is 1 if and only if the Prediction gives a number that almost exactly matches the ground truth.

6: If the Prediction is self-contradictory, "score" must be 0.

7: If the prediction is not answering the question, "score" must be 0.

8: If the prediction is a concise and correct summary of the ground truth, "score" is 1.

9: If ground truth contains a set of items, prediction must contain exactly same items for the score to be 1.

10: Otherwise, "score" is 0.

### Output a JSON blob with an "explanation" field explaining your answer as short as possible and an "score" field with value 1 or 0.
You should make the judgment based on provided examples.
Examples:
Question: "which company has higher eps, btu or cma?"
Ground Truth: "cma"
Prediction: "it is not possible to determine which company has a higher eps."
Output: {"score": 0, "explanation": "The prediction is not sure about the answer."}

Question: "who is taller, a or b?"
Ground Truth: "a"
Prediction: "The answer is a. a is of height 1.75 m and b is of height 1.82 m. So b is taller."
Output: {"score": 0, "explanation": "The prediction is self-contradictory."}

Question: "who among patricia place and lana clarkson is younger?"
Ground Truth: "lana clarkson"
Prediction: "lana clarkson (born april 5, 1962) is younger than patricia clarkson (born december 29, 1959)."
Output: {"score": 1, "explanation": "The prediction gives the correct answer."}

Question: "did lakers win more games than warriors in 2024-4?"
Ground Truth: "yes"
Prediction: "yes, lakers won more games than warriors in 2023-2024 season."
Output: {"score": 0, "explanation": "The prediction is not answering the question."}

Question: "what is the height of the building where citigroup is headquartered?"
Ground Truth: "151 m"
Prediction: "the height is 915 feet (279 m)."
Output: {"score": 0, "explanation": "The prediction, 151 m, does not match the ground truth, 279 m."}

Question: "who were the last 3 prime ministers of uk?"
Ground Truth: "rishi sunak, liz truss, and boris johnson"
Prediction: "1. liz truss, 2. boris johnson, 3.theresa may"
Output: {"score": 0, "explanation": "The prediction does not contain item, rishi sunak, that is in the grount truth."}

Question: "who authored the taming of the shrew?"
Ground Truth: "william shakespeare"
Prediction: "william shakespeare"
Output: {"score": 1, "explanation": "The prediction exactly matches the ground truth."}

Question: "who authored The Taming of the Shrew?"
Ground Truth: "william shakespeare"
Prediction: "w shakespeare"
Output: {"score": 1, "explanation": "The prediction matches the ground truth as w is the abbreviation of william."}

Question: "what is the state bird of california?"
Ground Truth: "california quail"
Prediction: "california valley quail"
Output: {"score": 1, "explanation": "The prediction matches the ground truth as california quail is also known as california valley quail."}

Question: "what country is maharashtra metro rail corporation limited located in?"
Ground truth: "india"
Prediction: "indianapolis"
Output: {"score": 0, "explanation": "The prediction doesn't match the ground truth answers."}

Question: "what was wolves's record in their last game in eng-premier league?"
Ground Truth: "w"
Prediction: "wolves's record in their last game in the eng-premier League was a 2-1 win over fulham."
Output: {"score": 1, "explanation": "The prediction correctly answers the result is a win."}

Question: "how many seconds is 3 minutes 15 seconds?"
Ground Truth: "195 seconds"
Prediction: "3 minutes 15 seconds is 195 seconds."
Output: {"score": 1, "explanation": "The prediction matches ground truth as it correctly states the number of seconds asked in the question."}

Question: "on which days did am distribute dividends in the last year?"
Ground Truth: "2023-01-24, 2023-04-25, 2023-07-25, 2023-10-24"
Prediction: "the company distributed dividends on october 24, 2023 and january 24, 2023."
Output: {"score": 0, "explanation": "The prediction partially matches the ground truth, but it is incomplete."}

Question: "on which days did xxx distribute dividends in the last year?"
Ground Truth: "2023-01-13, 2023-03-25, 2023-11-21"
Prediction: "xxx distributed dividends on 1. 2023-01-13, 2. 2023-03-25, 3. 2023-10-21."
Output: {"score": 0, "explanation": "The prediction contains an item, 2023-10-21, which is not in ground truth."}

Question: "who are current band members of maroon 5?"
Ground Truth: "adam Levine, jesse carmichael, james valentine, matt flynn, pj morton, sam farrar"
Prediction: "they are jesse carmichael, matt flynn, adam levine, pj morton, sam farrar, and james valentine."
Output: {"score": 1, "explanation": "The prediction exactly matches the ground truth."}

Question: "which movies comprise the matrix franchise?"
Ground Truth: "the matrix, the matrix reloaded, the matrix revolutions, the matrix resurrections"
Prediction: "the matrix, the matrix reloaded, the matrix revolutions, the animatrix, and the matrix resurrections."
Output: {"score": 0, "explanation": "The prediction covers more items than what are given by the ground truth."}

Question: "how deep is the deepest lake of new york?"
Ground Truth: "618 ft"
Prediction: "the deepest lake in new york is seneca lake, with a depth of 618.23 feet."
Output: {"score": 1, "explanation": "The prediction exactly matches the number in ground truth after rounding."}

Question: "what is the closing price of meta yesterday?"
Ground Truth: "$310.17"
Prediction: "310.2"
Output: {"score": 1, "explanation": "The prediction exactly matches the number in ground truth after rounding."}

Question: "what is the current market cap of appl?"
Ground Truth: "2.81 trillion"
Prediction: "2.667 trillion"
Output: {"score": 0, "explanation": "The prediction does not match the number in ground truth."}

Question: "what is the current pe ratio of appl?"
Ground Truth: "28.3"
Prediction: "the current pe ratio of apple is 26.66"
Output: {"score": 0, "explanation": "The prediction does not match the number in ground truth."}

Question: "how much is tesla's stock price down from its all-time high?"
Ground Truth: "$221.83"
Prediction: "209.52"
Output: {"score": 0, "explanation": "The prediction does not match the number in ground truth."}

Question: "what is the length of amazon river?"
Ground Truth: "over 4000 miles"
Prediction: "the length of amazon river is 4,000 miles"
Output: {"score": 0, "explanation": "The prediction does not say Amazon River is longer than 4000 miles."}

Question: "how many copies x were sold?"
Ground Truth: "2 million."
Prediction: "it is over 2 million"
Output: {"score": 0, "explanation": "The prediction does not match the ground truth."}

Question: "what is the population of country x?"
Ground Truth: "3,576,873"
Prediction: "the population of country x is 3.3 million."
Output: {"score": 0, "explanation": "The prediction, 3.3 M, does not match the number, 3.6 M, in ground truth."}

Question: "what is the current market value of stock x?"
Ground Truth: "$2,237,578,268"
Prediction: "$2.16 billion."
Output: {"score": 0, "explanation": "The prediction, 2.16 B, does not match the number, 2.2 B, in ground truth."}

Question: "how old is michael jordan?"
Ground Truth: "61"
Prediction: "mj was born on February 17, 1963."
Output: {"score": 0, "explanation": "The prediction does not explicitly say the age."}

Question: "how long did amy teach as a teacher?"
Ground Truth: "24 years and 255 days"
Prediction: "25 years."
Output: {"score": 0, "explanation": "The prediction does not exactly match the ground truth."}

Question: "at what age did usher perform in the half time show of superbowl?"
Ground Truth: "45 years old"
Prediction: "usher has not performed at a super bowl halftime show."
Output: {"score": 0, "explanation": "The prediction does not match the ground truth."}

Question: "what year did olivia rodrigo win the grammys best new artist award?"
Ground Truth: "2022"
Prediction: "sure! here's an answer in three words or fewer: 2022 grammy awards."
Output: {"score": 1, "explanation": "The prediction answers the correct number of the year."}

Question: "how many times have zendaya and tom holland starred in a film together?"
Ground Truth: "3"
Prediction: "they have starred in 3 films together: spider-man: homecoming, spider-man: far from home, and spider-man: no way home."
Output: {"score": 1, "explanation": "The prediction gives the right number and it is reasonable."}

Question: "who is younger, timothee chalamet or tom holland?"
Ground Truth: "tom holland"
Prediction: "timothée chalamet is younger than tom holland."
Output: {"score": 0, "explanation": "The prediction does not match the ground truth."}

Question: "who had more number one hits on the us billboard, a or b?"
Ground Truth: "a had more number one hits on the us billboard than b, with 20 number one hits compared to b's 15."
Prediction: "a"
Output: {"score": 1, "explanation": "The prediction is a concise and correct summary of the ground truth."}

Question: "what is xxx's birthdate?"
Ground Truth: "1996-01-01."
Prediction: "02/01/1996"
Output: {"score": 0, "explanation": "The prediction does not match the ground truth."}

Question: "what was the worldwide box office haul for movie x?"
Ground Truth: "101756123."
Prediction: "102 million"
Output: {"score": 1, "explanation": "The prediction exactly matches the number in ground truth after rounding."}

Question: "how much has spotify's user base increased by since 2020 in na?"
Ground Truth: "spotify's user base increased by 34 million since 2020."
Prediction: "spotify's north american user base increased from 36 million in 2020 to 85 million by 2021"
Output: {"score": 0, "explanation": "The prediction is not answering the question as it only gives the increase from 2020 to 2021."}

Question: <<QUESTION>>
Ground truth: <<GROUND_TRUTH>>
Prediction: <<PREDICTION>>
)PROMPT";

const char* kJudgeHead2Tail = R"PROMPT(The task is provided a QUESTION with GROUND_TRUTH answer, evaluate whether my ANSWER is correct, answer briefly with Yes/No. You will first see some [EXAMPLE]s on this task and then you will complete the [TASK].

Here are some examples:

[EXAMPLE]: QUESTION: Bangladesh Nationalist Party is the member of which international organization?
GROUND_TRUTH: Asia Pacific Democrat Union or Centrist Democrat International
ANSWER: according to the wikipedia page, bangladesh nationalist party is a member of the centrist democrat international.
Your answer: Yes

[EXAMPLE]: QUESTION: What/who influenced Charles Fourier?
GROUND_TRUTH: Nicolas-Edme Rétif
ANSWER: bob black.
Your answer: No

[EXAMPLE]: QUESTION: What patrol aircraft is used by the South African Air Force?
GROUND_TRUTH: C-47 Skytrain
ANSWER: according to the wikipedia infobox, the patrol aircraft used by the south african air force is the c-47tp.
Your answer: Yes

[EXAMPLE]: QUESTION: Which automobile team had the fastest driver during the 1960 Indianapolis 500?
GROUND_TRUTH: A.J. Watson
ANSWER: ken-paul
Your answer: No

[EXAMPLE]: QUESTION: What party was split from Communist Refoundation Party?
GROUND_TRUTH: Italian Communist Party
ANSWER: according to the wikipedia infobox, the italian communist party (pci) was split from to form the communist refoundation party (prc) in 1991.
Your answer: Yes

[EXAMPLE]: QUESTION: Which company owns TV Land?
GROUND_TRUTH: Paramount Media Networks
ANSWER: paramount global.
Your answer: No

[EXAMPLE]: QUESTION: What is the stadium where BSG Chemie Leipzig (1950)'s home matches are held?
GROUND_TRUTH: Alfred-Kunze-Sportpark or Georg-Schwarz-Sportpark
ANSWER: alfred-kunze-sportpark (also known as georg-schwarz-sportpark)
Your answer: Yes

[EXAMPLE]: QUESTION: What language is spoken in Evening (magazine)?
GROUND_TRUTH: Japanese language
ANSWER: english
Your answer: No

[EXAMPLE]: QUESTION: What is the ending theme of My Papa Pi?
GROUND_TRUTH: Pia Wurtzbach
ANSWER: the ending theme of my papa pi is "my papa pi" by piolo pascual, pia wurtzbach, and pepe herrera.
Your answer: Yes

[EXAMPLE]: QUESTION: What is the record label for Cogumelo Records?
GROUND_TRUTH: Relapse Records
ANSWER: cogumelo records.
Your answer: No

[EXAMPLE]: QUESTION: What is the legislative body in Albanian Kingdom (1928–1939)?
GROUND_TRUTH: Parliament of Albania
ANSWER: according to the wikipedia infobox and summary, the legislative body in the albanian kingdom (1928–1939) is the constitutional assembly.
Your answer: Yes

[EXAMPLE]: QUESTION: Jim Pearson was born in which place?
GROUND_TRUTH: Falkirk
ANSWER: chatham, ontario, canada.
Your answer: No

[EXAMPLE]: QUESTION: The predecessor of Cirilo Almario is?
GROUND_TRUTH: Manuel del Rosario
ANSWER: manuel p. del rosario, d.d.
Your answer: Yes

[EXAMPLE]: QUESTION: What is the format of The Wedge (Australian TV series)?
GROUND_TRUTH: Stereophonic sound
ANSWER: the format of the wedge (australian tv series) is a sketch show.
Your answer: No

[EXAMPLE]: QUESTION: What is the mouth of Montreal River (Timiskaming District)?
GROUND_TRUTH: Timiskaming, Unorganized, West Part, Ontario
ANSWER: according to the wikipedia infobox and summary, the mouth of the montreal river (timiskaming district) is lake timiskaming on the ottawa river.
Your answer: Yes

[EXAMPLE]: QUESTION: Who developed Flappy?
GROUND_TRUTH: DB-SOFT
ANSWER: flappy bird was developed by .gears, which is a game development company founded by dong nguyen.
Your answer: No

[EXAMPLE]: QUESTION: What significant design was created by Joseph Berlin?
GROUND_TRUTH: Cinema of Israel
ANSWER: mograbi cinema, tel aviv.
Your answer: Yes

[EXAMPLE]: QUESTION: What is Cinematic soul derived from?
GROUND_TRUTH: Disco
ANSWER: soul music, psychedelic soul, orchestral music, and film score.
Your answer: No

[EXAMPLE]: QUESTION: What patrol aircraft is used by the VPB-127?
GROUND_TRUTH: Lockheed Ventura or PV-1
ANSWER: pv-1
Your answer: Yes

[EXAMPLE]: QUESTION: Which automobile team had the fastest driver during the 1953 Curtis Trophy?
GROUND_TRUTH: Cooper Car Company
ANSWER: cooper-bristol.
Your answer: No

[TASK]: QUESTION: <<QUESTION>>
GROUND_TRUTH: <<GROUND_TRUTH>>
ANSWER: <<PREDICTION>>

Your answer is? )PROMPT";

}  // namespace

const TemplateCatalog& default_catalog() {
    static const TemplateCatalog catalog = [] {
        TemplateCatalog c;
        c.add(PromptTemplate::make("planning.entity_domain", kEntityDomain));
        c.add(PromptTemplate::make("planning.time_cot", kTimeCot));
        c.add(PromptTemplate::make("filter.tools", kFilterTools));
        c.add(PromptTemplate::make("filter.hop_boundary", kHopBoundary));
        c.add(PromptTemplate::make("summarize.cot", kSummarizeCot));
        c.add(PromptTemplate::make("summarize.plain", kSummarizePlain));
        c.add(PromptTemplate::make("judge.crag", kJudgeCrag));
        c.add(PromptTemplate::make("judge.head2tail", kJudgeHead2Tail));
        // The SFT correctness judge shares the grading prompt text.
        c.add(PromptTemplate::make("sft.judge", kJudgeCrag));
        return c;
    }();
    return catalog;
}

}  // namespace kerag
